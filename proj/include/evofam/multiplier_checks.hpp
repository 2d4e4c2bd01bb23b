#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "evofam/operator_spec.hpp"
#include "evofam/symbol_propagator.hpp"

namespace evofam {

// Geometry of a sector pair theta0 < theta with its resolvent constant:
//   b = |cos(theta - theta0)|, eps = sqrt((1 - b)/2), C = 1/(eps * kappa).
struct SectorGeometry {
    double theta0 = 0.0;
    double theta = 0.0;
    double kappa = 0.0;
    double b = 0.0;
    double eps = 0.0;
    double c_resolvent = 0.0;
    bool overflow = false;  // eps * kappa underflowed; C reported as infinity

    // Monte-Carlo verification of |lambda + mu| >= eps (|lambda| + |mu|) for
    // lambda in the open sector of half-angle pi - theta and mu in the open
    // sector of half-angle theta0.
    double min_ratio = 0.0;
    int samples = 0;
};

// Requires 0 < theta0 < theta < pi and kappa > 0.  Runs the randomized
// verification with the given sample count (deterministic seed).
SectorGeometry sector_geometry(double theta0, double theta, double kappa,
                               int mc_samples = 100000, unsigned seed = 0x5ec70f);

// ||B||^n r^{-n-1} - ||B^{-1}|| for a matrix whose spectrum stays outside
// the disc of radius r.  Throws when an eigenvalue has modulus < r.
double inverse_norm_bound_margin(const Eigen::MatrixXcd& b, double r, int n);

// sup over (t, lambda, xi) of ||(A_#(t, xi) + lambda)^{-1}|| (|xi|^{2m} + |lambda|).
// Times run over one point per coefficient segment (exact for
// piecewise-constant paths).  A singular resolvent is reported as an
// infinite constant with the offending grid point.
struct ResolventScanResult {
    double c_observed = 0.0;
    bool singular = false;
    std::complex<double> worst_lambda{0.0, 0.0};
    Eigen::VectorXd worst_xi;
    double worst_time = 0.0;
};

ResolventScanResult resolvent_bound_scan(const OperatorSpec& spec,
                                         const std::vector<std::complex<double>>& lambda_grid,
                                         const FrequencyGrid& xi_grid);

// Log-spaced |lambda| over the given decades on three rays of the sector of
// half-angle pi - theta: the two boundary rays and the positive real axis.
std::vector<std::complex<double>> sector_lambda_grid(double theta, double modulus_min = 1e-2,
                                                     double modulus_max = 1e2,
                                                     int per_ray = 17);

// Exponent convention for the resolvent multiplier
//   M(xi) = lambda^{e} xi^beta (lambda + A_#(xi))^{-1},
// e = 1 - |beta|/m (as printed) or e = 1 - |beta|/(2m) (2m-homogeneous).
enum class ExponentConvention { paper, homogeneous };

struct MihlinScanRow {
    int derivative_order = 0;  // |alpha|
    double constant = 0.0;
    double refined_constant = 0.0;
    double relative_change = 0.0;
    bool stable = false;  // change within 5%
};

struct MihlinScanReport {
    ExponentConvention convention = ExponentConvention::homogeneous;
    MultiIndex beta;
    std::complex<double> lambda{1.0, 0.0};
    double frozen_time = 0.0;
    std::vector<MihlinScanRow> rows;  // one per derivative order 0..max_order
    bool all_stable = false;
};

// Mihlin constants sup_xi |xi|^{|alpha|} ||D^alpha M(xi)|| over the given
// grid for every |alpha| <= max_order, for coefficients frozen at the given
// time.  Derivatives by finite differences; each order's constant is the max
// over the multi-indices of that order.
MihlinScanReport mihlin_constant_scan(const OperatorSpec& spec, double frozen_time,
                                      std::complex<double> lambda, const MultiIndex& beta,
                                      int max_order, ExponentConvention convention,
                                      const FrequencyGrid& xi_grid);

}  // namespace evofam
