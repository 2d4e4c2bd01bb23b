#include "evofam/coefficient_path.hpp"

#include <algorithm>
#include <stdexcept>

#include "evofam/linalg.hpp"

namespace evofam {

CoefficientPath::CoefficientPath(std::vector<double> breakpoints,
                                 std::vector<Eigen::MatrixXcd> segments,
                                 std::optional<double> declared_norm_bound)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
    if (segments_.empty())
        throw std::invalid_argument("CoefficientPath: needs at least one segment");
    if (segments_.size() != breakpoints_.size() + 1)
        throw std::invalid_argument("CoefficientPath: segment count must be breakpoint count + 1");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i - 1] < breakpoints_[i]))
            throw std::invalid_argument("CoefficientPath: breakpoints must be strictly increasing");
    const Eigen::Index n = segments_.front().rows();
    if (n == 0 || segments_.front().cols() != n)
        throw std::invalid_argument("CoefficientPath: segments must be square and nonempty");
    double max_norm = 0.0;
    for (const auto& s : segments_) {
        if (s.rows() != n || s.cols() != n)
            throw std::invalid_argument("CoefficientPath: all segments must have equal size");
        max_norm = std::max(max_norm, spectral_norm(s));
    }
    if (declared_norm_bound) {
        if (*declared_norm_bound < 0)
            throw std::invalid_argument("CoefficientPath: norm bound must be nonnegative");
        if (max_norm > *declared_norm_bound * (1.0 + 1e-12) + 1e-14)
            throw std::invalid_argument("CoefficientPath: a segment exceeds the declared norm bound");
        norm_bound_ = *declared_norm_bound;
    } else {
        norm_bound_ = max_norm;
    }
}

CoefficientPath CoefficientPath::constant(Eigen::MatrixXcd value) {
    std::vector<Eigen::MatrixXcd> seg;
    seg.push_back(std::move(value));
    return CoefficientPath({}, std::move(seg));
}

int CoefficientPath::segment_index(double t) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return static_cast<int>(it - breakpoints_.begin());
}

CoefficientPath CoefficientPath::adjoint_reversed(double anchor) const {
    const std::size_t b = breakpoints_.size();
    std::vector<double> rev_breaks(b);
    for (std::size_t i = 0; i < b; ++i) rev_breaks[i] = anchor - breakpoints_[b - 1 - i];
    std::vector<Eigen::MatrixXcd> rev_segments(segments_.size());
    // new segment j covers reversed times landing in old segment (b - j)
    for (std::size_t j = 0; j < segments_.size(); ++j)
        rev_segments[j] = segments_[b - j].adjoint();
    return CoefficientPath(std::move(rev_breaks), std::move(rev_segments));
}

CoefficientPath CoefficientPath::shifted_by(const Eigen::MatrixXcd& delta) const {
    std::vector<Eigen::MatrixXcd> shifted(segments_.size());
    for (std::size_t j = 0; j < segments_.size(); ++j) shifted[j] = segments_[j] + delta;
    return CoefficientPath(breakpoints_, std::move(shifted));
}

}  // namespace evofam
