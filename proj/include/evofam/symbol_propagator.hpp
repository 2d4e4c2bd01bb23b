#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "evofam/operator_spec.hpp"

namespace evofam {

// Forcing term f(t, xi) of the inhomogeneous symbol ODE
//   v_t(t, xi) + A_#(t, xi) v(t, xi) = f(t, xi).
// An empty callback means f = 0.
struct ForcingPath {
    std::function<Eigen::MatrixXcd(double, const Eigen::VectorXd&)> value;
    int smoothness = 0;       // declared C^k class in xi
    double l2_bound = 0.0;    // declared L^2-in-time bound (0 = undeclared)

    bool is_zero() const { return !value; }
};

// The symbol flow v(t, xi) on a time grid for one frequency, together with
// the data (initial matrix and forcing) it was produced from.
struct PropagationResult {
    Eigen::VectorXd xi;
    double start = 0.0;
    int half_order = 1;  // m of the producing spec
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> matrices;
    Eigen::MatrixXcd initial;
    ForcingPath forcing;
};

// Solution at time t of v' + A_#(t, xi) v = 0, v(s) = M: the time-ordered
// product of segment exponentials applied to M, with later segments
// multiplying on the left.  Exact for piecewise-constant coefficients;
// t == s returns M.
Eigen::MatrixXcd propagate_homogeneous(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                       double s, double t, const Eigen::MatrixXcd& m);

// Forced propagation on an increasing grid starting at s, by variation of
// constants within each coefficient segment (homogeneous factor exact, the
// forcing integral by adaptive Simpson).
PropagationResult propagate_forced(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                   double s, const std::vector<double>& t_grid,
                                   const Eigen::MatrixXcd& m, const ForcingPath& forcing,
                                   double quadrature_tol = 1e-10);

// Minimum over the grid of the exponential-envelope bound minus ||v(t)||^2:
//
//   rhs(t) = e^{2(eps-kappa)|xi|^{2m}(t-s)} ||M||^2
//          + 1/(2 eps) * int_s^t e^{2(eps-kappa)|xi|^{2m}(t-r)} |xi|^{-2m} ||f(r,xi)||^2 dr
//
// A nonnegative margin verifies the envelope.  eps = 0 is allowed only with
// zero forcing; requires 0 <= eps < kappa.
double gronwall_envelope_margin(const PropagationResult& result, double kappa, double eps);

// Picard iteration for u(t) = u0 + int_s^t Q(r, u(r)) + f(r) dr on the
// weighted space with norm sup_t e^{-lambda (t-s)} |u(t)|.
struct PicardConfig {
    double lipschitz_k1 = 1.0;   // Lipschitz constant of Q in the state
    double growth_k2 = 1.0;      // |Q(t,x)| <= K2 (1 + |x|)
    double lambda = 0.0;         // exponential weight rate; 0 means K1 + 1
    int max_iterations = 60;
    double tolerance = 1e-12;    // convergence threshold in the weighted norm
    int grid_points = 2049;
};

struct PicardResult {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> values;
    std::vector<double> contraction_factors;  // per-iteration weighted-norm ratios
    double weighted_norm = 0.0;               // sup_t e^{-lambda (t-s)} |u(t)|
    double measured_c = 0.0;                  // weighted_norm / (1 + |u0| + ||f||_{L^2})
    int iterations = 0;
    bool converged = false;
};

// Throws divergence_error when the iteration fails to contract for three
// consecutive iterations.
PicardResult picard_solve(
    const std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>& q,
    const Eigen::VectorXcd& u0, const std::function<Eigen::VectorXcd(double)>& f, double s,
    double t_end, const PicardConfig& config);

// D^gamma_xi v(t, xi) by central finite differences with Richardson
// extrapolation; |gamma| = 0 returns v itself.  Requires xi != 0 and
// |gamma| <= max_order.
Eigen::MatrixXcd symbol_derivative(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                   const MultiIndex& gamma, double s, double t,
                                   const Eigen::MatrixXcd& m, const ForcingPath& forcing = {},
                                   int max_order = 4);

// Sup-norm residual of the ODE that D^gamma v must satisfy (zero initial
// value and the Leibniz forcing -sum c_{eta1,eta2} D^{eta1}A_# D^{eta2}v over
// eta1 + eta2 = gamma, eta2 != gamma), measured on a time grid that avoids
// coefficient breakpoints.  Homogeneous flow only (f = 0).
double symbol_derivative_ode_residual(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                      const MultiIndex& gamma, double s, double t,
                                      const Eigen::MatrixXcd& m, int time_cells = 80);

// Log-spaced radii times fixed unit directions; the frequency grids used by
// the decay and multiplier scans.  Zero is excluded by construction.
struct FrequencyGrid {
    std::vector<double> radii;
    std::vector<Eigen::VectorXd> directions;

    // New grid with geometric midpoints inserted between consecutive radii.
    FrequencyGrid refined() const;

    static FrequencyGrid log_spaced(int dim, double r_min, double r_max, int radii_count,
                                    int direction_count);
};

// sup over the grid of ||D^gamma v(t, xi)|| |xi|^{|gamma| + 2mk} (t-s)^k, with
// a stability probe under one grid refinement.
struct DecayScanResult {
    double constant = 0.0;
    double refined_constant = 0.0;
    double relative_change = 0.0;
    bool stable = false;     // change within 5%
    bool verified = false;   // change within a factor 2 (hard failure otherwise)
};

DecayScanResult mihlin_decay_scan(const OperatorSpec& spec, const MultiIndex& gamma, int k,
                                  const FrequencyGrid& xi_grid, const std::vector<double>& t_grid,
                                  double s);

}  // namespace evofam
