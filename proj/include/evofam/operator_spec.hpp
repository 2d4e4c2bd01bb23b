#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "evofam/coefficient_path.hpp"
#include "evofam/multi_index.hpp"

namespace evofam {

// Differential operator of order 2m on R^d acting on C^N-valued functions,
//
//   (A(t)u)(x) = sum_{|alpha|<=m, |beta|<=m} a_{alphabeta}(t) D^alpha D^beta u(x),
//
// with D = -i(d_1, ..., d_d) and time-only, piecewise-constant coefficients.
class OperatorSpec {
public:
    using CoefficientMap = std::map<std::pair<MultiIndex, MultiIndex>, CoefficientPath>;

    OperatorSpec(int half_order, int dim, int system_size, CoefficientMap coefficients,
                 bool divergence_form = false,
                 std::function<double(double)> continuity_modulus = {});

    int half_order() const { return m_; }    // m
    int dim() const { return d_; }           // d
    int system_size() const { return n_; }   // N

    bool divergence_form() const { return divergence_form_; }
    const std::function<double(double)>& continuity_modulus() const { return continuity_modulus_; }
    const CoefficientMap& coefficients() const { return coefficients_; }

    // max of the per-path norm bounds (the constant K of the boundedness
    // condition).
    double coefficient_bound() const;

    // Sorted union of breakpoints over the top-order pairs |alpha|=|beta|=m
    // (the ones entering the principal symbol), resp. over all pairs.
    const std::vector<double>& principal_breakpoints() const { return principal_breakpoints_; }
    const std::vector<double>& all_breakpoints() const { return all_breakpoints_; }

    // A(t) - delta (-Laplacian)^m: subtracts delta |xi|^{2m} I from the
    // principal symbol by adjusting the diagonal pairs (mu, mu), |mu| = m.
    OperatorSpec subtract_laplacian_power(double delta) const;

    // Coefficients conjugate-transposed and time-reversed about the anchor:
    // the generator of the adjoint family tau -> A(anchor - tau)^*.
    OperatorSpec adjoint_reversed(double anchor) const;

private:
    int m_, d_, n_;
    CoefficientMap coefficients_;
    bool divergence_form_;
    std::function<double(double)> continuity_modulus_;
    std::vector<double> principal_breakpoints_;
    std::vector<double> all_breakpoints_;
};

// Principal symbol A_#(t, xi) = sum_{|alpha|=|beta|=m} xi^{alpha+beta} a_{alphabeta}(t);
// 2m-homogeneous in xi, zero at xi = 0.
Eigen::MatrixXcd principal_symbol(const OperatorSpec& spec, double t, const Eigen::VectorXd& xi);

// Full symbol including the lower-order pairs.
Eigen::MatrixXcd full_symbol(const OperatorSpec& spec, double t, const Eigen::VectorXd& xi);

// Exact xi-derivative D^eta of the principal symbol (derivative of a
// polynomial with matrix coefficients).
Eigen::MatrixXcd principal_symbol_derivative(const OperatorSpec& spec, double t,
                                             const Eigen::VectorXd& xi, const MultiIndex& eta);

// Result of an ellipticity certification run.
//
// kappa_lh:   min over samples of the smallest eigenvalue of the Hermitian
//             part of A_# on the unit sphere.
// kappa_spec: lower bound for |sigma(A_#)| on the unit sphere.
// theta0:     sector half-angle estimate.  The spectral check stores the
//             measured max |arg|; the Legendre-Hadamard check stores the
//             derived angle arccos(kappa_lh / k_bound).
// theta:      derived angle arccos(kappa_lh / k_bound), pi when not elliptic.
// k_bound:    max spectral norm of the sampled symbols (the bound entering
//             the derived angle).
struct EllipticityCertificate {
    double kappa_lh = 0.0;
    double kappa_spec = 0.0;
    double theta0 = 0.0;
    double theta = 0.0;
    double k_bound = 0.0;
    int sphere_samples = 0;
    int time_samples = 0;
    bool passed = false;
};

// Positivity of the Hermitian part of the principal symbol over sampled
// (t, |xi| = 1).  A non-elliptic spec yields passed = false, not an error.
EllipticityCertificate check_legendre_hadamard(const OperatorSpec& spec, int sphere_samples,
                                               int time_samples);

// Spectral sector check: kappa_spec = min |sigma(A_#)|, theta0 = max |arg|
// over the sampled spectra, and validation that theta0 stays below the
// derived angle whenever the Hermitian part is positive.
EllipticityCertificate check_uniform_ellipticity(const OperatorSpec& spec, int sphere_samples,
                                                 int time_samples);

// Deterministic unit-sphere sample set: the coordinate axes followed by a
// Halton-sequence fill.  Prefix-nested, so refining the count only adds
// points.
std::vector<Eigen::VectorXd> unit_sphere_samples(int dim, int count);

// Time sample set for a piecewise-constant spec: one point inside every
// maximal constancy interval (which makes the sampling exact in t), plus
// `extra` van der Corput points across the breakpoint hull.  Prefix-nested
// in `extra`.
std::vector<double> coefficient_time_samples(const OperatorSpec& spec, int extra);

}  // namespace evofam
