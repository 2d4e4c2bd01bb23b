#include "evofam/symbol_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evofam/errors.hpp"
#include "evofam/finite_difference.hpp"
#include "evofam/linalg.hpp"
#include "evofam/matrix_exp.hpp"
#include "evofam/quadrature.hpp"

namespace evofam {

namespace {

// Split [a, b] at the breakpoints strictly inside it.
std::vector<std::pair<double, double>> constancy_pieces(const std::vector<double>& breaks,
                                                        double a, double b) {
    std::vector<std::pair<double, double>> pieces;
    double left = a;
    for (double cut : breaks) {
        if (cut <= a || cut >= b) continue;
        pieces.emplace_back(left, cut);
        left = cut;
    }
    pieces.emplace_back(left, b);
    return pieces;
}

}  // namespace

Eigen::MatrixXcd propagate_homogeneous(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                       double s, double t, const Eigen::MatrixXcd& m) {
    if (t < s) throw std::invalid_argument("propagate_homogeneous: requires s <= t");
    if (xi.size() != spec.dim())
        throw std::invalid_argument("propagate_homogeneous: xi dimension mismatch");
    if (t == s) return m;
    Eigen::MatrixXcd v = m;
    int piece_index = 0;
    for (const auto& [a, b] : constancy_pieces(spec.principal_breakpoints(), s, t)) {
        const Eigen::MatrixXcd symbol = principal_symbol(spec, 0.5 * (a + b), xi);
        try {
            v = matrix_exponential(-(b - a) * symbol) * v;
        } catch (const numeric_error& e) {
            throw numeric_error(std::string(e.what()) + " (segment " +
                                std::to_string(piece_index) + ")");
        }
        ++piece_index;
    }
    return v;
}

PropagationResult propagate_forced(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                   double s, const std::vector<double>& t_grid,
                                   const Eigen::MatrixXcd& m, const ForcingPath& forcing,
                                   double quadrature_tol) {
    if (t_grid.empty() || t_grid.front() != s)
        throw std::invalid_argument("propagate_forced: grid must start at s");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("propagate_forced: grid must be increasing");
    if (xi.size() != spec.dim())
        throw std::invalid_argument("propagate_forced: xi dimension mismatch");

    PropagationResult result;
    result.xi = xi;
    result.start = s;
    result.half_order = spec.half_order();
    result.times = t_grid;
    result.initial = m;
    result.forcing = forcing;
    result.matrices.reserve(t_grid.size());
    result.matrices.push_back(m);

    Eigen::MatrixXcd v = m;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        for (const auto& [a, b] : constancy_pieces(spec.principal_breakpoints(), t_grid[i - 1],
                                                   t_grid[i])) {
            const Eigen::MatrixXcd symbol = principal_symbol(spec, 0.5 * (a + b), xi);
            v = matrix_exponential(-(b - a) * symbol) * v;
            if (!forcing.is_zero()) {
                v += adaptive_simpson_matrix(
                    [&](double r) {
                        return (matrix_exponential(-(b - r) * symbol) * forcing.value(r, xi))
                            .eval();
                    },
                    a, b, quadrature_tol);
            }
        }
        result.matrices.push_back(v);
    }
    return result;
}

double gronwall_envelope_margin(const PropagationResult& result, double kappa, double eps) {
    const bool forced = !result.forcing.is_zero();
    if (eps == 0.0 && forced)
        throw std::invalid_argument("gronwall_envelope_margin: eps = 0 requires zero forcing");
    if (eps < 0.0 || eps >= kappa)
        throw std::invalid_argument("gronwall_envelope_margin: requires 0 <= eps < kappa");
    const double xi_2m = std::pow(result.xi.norm(), 2 * result.half_order);
    if (forced && xi_2m == 0.0)
        throw std::invalid_argument("gronwall_envelope_margin: forced envelope undefined at xi = 0");

    const double rate = 2.0 * (eps - kappa) * xi_2m;
    const double m_sq = std::pow(spectral_norm(result.initial), 2);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        const double t = result.times[i];
        double rhs = std::exp(rate * (t - result.start)) * m_sq;
        if (forced) {
            rhs += 1.0 / (2.0 * eps) *
                   adaptive_simpson(
                       [&](double r) {
                           const double f_norm =
                               spectral_norm(result.forcing.value(r, result.xi));
                           return std::exp(rate * (t - r)) / xi_2m * f_norm * f_norm;
                       },
                       result.start, t, 1e-12);
        }
        const double v_norm = spectral_norm(result.matrices[i]);
        margin = std::min(margin, rhs - v_norm * v_norm);
    }
    return margin;
}

PicardResult picard_solve(
    const std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>& q,
    const Eigen::VectorXcd& u0, const std::function<Eigen::VectorXcd(double)>& f, double s,
    double t_end, const PicardConfig& config) {
    if (!(t_end > s)) throw std::invalid_argument("picard_solve: requires t_end > s");
    if (config.grid_points < 3)
        throw std::invalid_argument("picard_solve: needs at least 3 grid points");
    const double lambda = config.lambda > 0.0 ? config.lambda : config.lipschitz_k1 + 1.0;
    if (lambda <= config.lipschitz_k1)
        throw std::invalid_argument("picard_solve: lambda must exceed the Lipschitz constant");

    const int n = config.grid_points;
    const double dt = (t_end - s) / (n - 1);
    std::vector<double> times(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) times[static_cast<std::size_t>(i)] = s + i * dt;

    auto weighted_norm_of = [&](const std::vector<Eigen::VectorXcd>& path) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i)
            norm = std::max(norm, std::exp(-lambda * (times[static_cast<std::size_t>(i)] - s)) *
                                      path[static_cast<std::size_t>(i)].norm());
        return norm;
    };

    std::vector<Eigen::VectorXcd> current(static_cast<std::size_t>(n), u0);
    std::vector<Eigen::VectorXcd> next(static_cast<std::size_t>(n), u0);
    std::vector<Eigen::VectorXcd> integrand(static_cast<std::size_t>(n));

    PicardResult result;
    result.times = times;
    double previous_diff = -1.0;
    int non_contracting = 0;

    for (int it = 1; it <= config.max_iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            integrand[idx] = q(times[idx], current[idx]) + f(times[idx]);
        }
        // cumulative trapezoid of Q(r, u(r)) + f(r)
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(u0.size());
        next[0] = u0;
        for (int i = 1; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            acc += 0.5 * dt * (integrand[idx - 1] + integrand[idx]);
            next[idx] = u0 + acc;
        }

        double diff = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            diff = std::max(diff, std::exp(-lambda * (times[idx] - s)) *
                                      (next[idx] - current[idx]).norm());
        }
        current.swap(next);
        result.iterations = it;

        if (previous_diff > 10.0 * config.tolerance) {
            const double factor = diff / previous_diff;
            result.contraction_factors.push_back(factor);
            non_contracting = factor >= 1.0 ? non_contracting + 1 : 0;
            if (non_contracting >= 3)
                throw divergence_error("picard_solve: no contraction for 3 consecutive iterations");
        }
        previous_diff = diff;
        if (diff <= config.tolerance * std::max(1.0, weighted_norm_of(current))) {
            result.converged = true;
            break;
        }
    }

    result.values = current;
    result.weighted_norm = weighted_norm_of(current);
    double f_l2 = 0.0;
    {
        // trapezoid for ||f||_{L^2(s, t_end)}
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            const double v = f(times[idx]).squaredNorm();
            sum += w * v * dt;
        }
        f_l2 = std::sqrt(sum);
    }
    result.measured_c = result.weighted_norm / (1.0 + u0.norm() + f_l2);
    return result;
}

Eigen::MatrixXcd symbol_derivative(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                   const MultiIndex& gamma, double s, double t,
                                   const Eigen::MatrixXcd& m, const ForcingPath& forcing,
                                   int max_order) {
    if (order(gamma) > max_order)
        throw std::invalid_argument("symbol_derivative: |gamma| exceeds the configured maximum");
    if (order(gamma) > 0 && xi.norm() == 0.0)
        throw std::invalid_argument("symbol_derivative: requires xi != 0");
    auto flow = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXcd {
        if (forcing.is_zero() || t == s) return propagate_homogeneous(spec, y, s, t, m);
        return propagate_forced(spec, y, s, {s, t}, m, forcing).matrices.back();
    };
    if (order(gamma) == 0) return flow(xi);
    return finite_difference_derivative(flow, xi, gamma);
}

double symbol_derivative_ode_residual(const OperatorSpec& spec, const Eigen::VectorXd& xi,
                                      const MultiIndex& gamma, double s, double t,
                                      const Eigen::MatrixXcd& m, int time_cells) {
    if (order(gamma) < 1)
        throw std::invalid_argument("symbol_derivative_ode_residual: requires |gamma| >= 1");
    if (time_cells < 8)
        throw std::invalid_argument("symbol_derivative_ode_residual: needs at least 8 cells");

    // Sub-derivative paths needed by the Leibniz forcing.
    const auto etas = sub_indices(gamma);
    auto path_value = [&](const MultiIndex& eta, double r) {
        return symbol_derivative(spec, xi, eta, s, r, m, {}, order(gamma));
    };

    // Sample times strictly inside constancy pieces; the 5-point time stencil
    // must not straddle a breakpoint.
    double residual = 0.0;
    for (const auto& [a, b] : constancy_pieces(spec.principal_breakpoints(), s, t)) {
        const double h = (b - a) / time_cells;
        for (int i = 2; i <= time_cells - 2; i += std::max(1, time_cells / 12)) {
            const double r = a + i * h;
            // 4th-order central time derivative of D^gamma v
            const Eigen::MatrixXcd w_m2 = path_value(gamma, r - 2 * h);
            const Eigen::MatrixXcd w_m1 = path_value(gamma, r - h);
            const Eigen::MatrixXcd w_0 = path_value(gamma, r);
            const Eigen::MatrixXcd w_p1 = path_value(gamma, r + h);
            const Eigen::MatrixXcd w_p2 = path_value(gamma, r + 2 * h);
            const Eigen::MatrixXcd dw = (w_m2 - 8.0 * w_m1 + 8.0 * w_p1 - w_p2) / (12.0 * h);

            Eigen::MatrixXcd leibniz = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
            for (const auto& eta2 : etas) {
                if (eta2 == gamma) continue;
                const MultiIndex eta1 = subtract(gamma, eta2);
                leibniz += multinomial(gamma, eta1) *
                           principal_symbol_derivative(spec, r, xi, eta1) * path_value(eta2, r);
            }
            const Eigen::MatrixXcd ode =
                dw + principal_symbol(spec, r, xi) * w_0 + leibniz;
            residual = std::max(residual, spectral_norm(ode));
        }
    }
    return residual;
}

FrequencyGrid FrequencyGrid::refined() const {
    FrequencyGrid fine;
    fine.directions = directions;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        fine.radii.push_back(radii[i]);
        if (i + 1 < radii.size()) fine.radii.push_back(std::sqrt(radii[i] * radii[i + 1]));
    }
    return fine;
}

FrequencyGrid FrequencyGrid::log_spaced(int dim, double r_min, double r_max, int radii_count,
                                        int direction_count) {
    if (!(0.0 < r_min && r_min < r_max) || radii_count < 2)
        throw std::invalid_argument("FrequencyGrid: bad radius range");
    FrequencyGrid grid;
    grid.directions = unit_sphere_samples(dim, direction_count);
    const double step = std::log(r_max / r_min) / (radii_count - 1);
    for (int i = 0; i < radii_count; ++i) grid.radii.push_back(r_min * std::exp(i * step));
    return grid;
}

namespace {

double decay_scan_pass(const OperatorSpec& spec, const MultiIndex& gamma, int k,
                       const FrequencyGrid& grid, const std::vector<double>& t_grid, double s) {
    const Eigen::MatrixXcd ident =
        Eigen::MatrixXcd::Identity(spec.system_size(), spec.system_size());
    double constant = 0.0;
    for (double r : grid.radii) {
        for (const auto& dir : grid.directions) {
            const Eigen::VectorXd xi = r * dir;
            const double weight_xi = std::pow(r, order(gamma) + 2 * spec.half_order() * k);
            for (double t : t_grid) {
                const Eigen::MatrixXcd d = symbol_derivative(spec, xi, gamma, s, t, ident);
                constant = std::max(constant,
                                    spectral_norm(d) * weight_xi * std::pow(t - s, k));
            }
        }
    }
    return constant;
}

std::vector<double> refined_times(const std::vector<double>& t_grid) {
    std::vector<double> fine;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        fine.push_back(t_grid[i]);
        if (i + 1 < t_grid.size()) fine.push_back(0.5 * (t_grid[i] + t_grid[i + 1]));
    }
    return fine;
}

}  // namespace

DecayScanResult mihlin_decay_scan(const OperatorSpec& spec, const MultiIndex& gamma, int k,
                                  const FrequencyGrid& xi_grid, const std::vector<double>& t_grid,
                                  double s) {
    if (k < 0) throw std::invalid_argument("mihlin_decay_scan: k must be >= 0");
    for (double r : xi_grid.radii)
        if (!(r > 0.0)) throw std::invalid_argument("mihlin_decay_scan: xi grid must exclude 0");
    for (double t : t_grid)
        if (!(t > s)) throw std::invalid_argument("mihlin_decay_scan: times must exceed s");

    DecayScanResult result;
    result.constant = decay_scan_pass(spec, gamma, k, xi_grid, t_grid, s);
    result.refined_constant =
        decay_scan_pass(spec, gamma, k, xi_grid.refined(), refined_times(t_grid), s);
    const double base = std::max(result.constant, 1e-300);
    result.relative_change = std::abs(result.refined_constant - result.constant) / base;
    result.stable = result.relative_change <= 0.05;
    result.verified = result.refined_constant <= 2.0 * result.constant &&
                      result.constant <= 2.0 * result.refined_constant;
    return result;
}

}  // namespace evofam
