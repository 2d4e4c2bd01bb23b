#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace evofam {

// Piecewise-constant-in-time complex N x N matrix function: the model of a
// coefficient that is merely measurable in time.  With B breakpoints there
// are B+1 segments; segment j is the value on [b_{j-1}, b_j), so the path is
// right-continuous at each breakpoint.
class CoefficientPath {
public:
    // Breakpoints must be strictly increasing and segments.size() must equal
    // breakpoints.size() + 1, all matrices square of equal size.  When a norm
    // bound is declared, every segment's spectral norm must stay below it;
    // otherwise the bound is computed from the segments.
    CoefficientPath(std::vector<double> breakpoints,
                    std::vector<Eigen::MatrixXcd> segments,
                    std::optional<double> declared_norm_bound = std::nullopt);

    static CoefficientPath constant(Eigen::MatrixXcd value);

    int dim() const { return static_cast<int>(segments_.front().rows()); }
    int segment_count() const { return static_cast<int>(segments_.size()); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const Eigen::MatrixXcd& segment(int index) const { return segments_.at(static_cast<std::size_t>(index)); }

    // Value at time t (right-continuous at breakpoints).
    const Eigen::MatrixXcd& at(double t) const { return segments_[static_cast<std::size_t>(segment_index(t))]; }
    int segment_index(double t) const;

    double norm_bound() const { return norm_bound_; }

    // The path tau -> a(anchor - tau)^*: time runs backwards from the anchor
    // and every segment is conjugate-transposed.
    CoefficientPath adjoint_reversed(double anchor) const;

    // Same breakpoints, every segment shifted by the given matrix.
    CoefficientPath shifted_by(const Eigen::MatrixXcd& delta) const;

private:
    std::vector<double> breakpoints_;
    std::vector<Eigen::MatrixXcd> segments_;
    double norm_bound_;
};

}  // namespace evofam
