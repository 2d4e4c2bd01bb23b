#include "evofam/multiplier_checks.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/LU>

#include "evofam/errors.hpp"
#include "evofam/finite_difference.hpp"
#include "evofam/linalg.hpp"

namespace evofam {

SectorGeometry sector_geometry(double theta0, double theta, double kappa, int mc_samples,
                               unsigned seed) {
    if (!(0.0 < theta0 && theta0 < theta && theta < M_PI))
        throw std::invalid_argument("sector_geometry: requires 0 < theta0 < theta < pi");
    if (!(kappa > 0.0)) throw std::invalid_argument("sector_geometry: kappa must be positive");

    SectorGeometry g;
    g.theta0 = theta0;
    g.theta = theta;
    g.kappa = kappa;
    g.b = std::abs(std::cos(theta - theta0));
    g.eps = std::sqrt(0.5 * (1.0 - g.b));
    if (g.eps * kappa < std::numeric_limits<double>::min() * 1e10) {
        g.overflow = true;
        g.c_resolvent = std::numeric_limits<double>::infinity();
    } else {
        g.c_resolvent = 1.0 / (g.eps * kappa);
    }

    if (mc_samples > 0) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double lambda_half_angle = M_PI - theta;
        double min_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < mc_samples; ++i) {
            // moduli log-uniform over six decades, arguments uniform in the
            // open sectors
            const double r1 = std::pow(10.0, -3.0 + 6.0 * unit(rng));
            const double r2 = std::pow(10.0, -3.0 + 6.0 * unit(rng));
            const double a1 = lambda_half_angle * (2.0 * unit(rng) - 1.0);
            const double a2 = theta0 * (2.0 * unit(rng) - 1.0);
            const std::complex<double> lambda = std::polar(r1, a1);
            const std::complex<double> mu = std::polar(r2, a2);
            min_ratio = std::min(min_ratio, std::abs(lambda + mu) / (r1 + r2));
        }
        g.min_ratio = min_ratio;
        g.samples = mc_samples;
    }
    return g;
}

double inverse_norm_bound_margin(const Eigen::MatrixXcd& b, double r, int n) {
    if (!(r > 0.0)) throw std::invalid_argument("inverse_norm_bound_margin: r must be positive");
    if (n < 0) throw std::invalid_argument("inverse_norm_bound_margin: n must be >= 0");
    const Eigen::VectorXcd ev = eigenvalues_checked(b, "inverse_norm_bound_margin");
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i]) < r * (1.0 - 1e-12))
            throw std::invalid_argument(
                "inverse_norm_bound_margin: eigenvalue of modulus below r");
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(b);
    if (!lu.isInvertible())
        throw numeric_error("inverse_norm_bound_margin: matrix numerically singular");
    const double inv_norm = spectral_norm(lu.inverse());
    return std::pow(spectral_norm(b), n) * std::pow(r, -n - 1) - inv_norm;
}

ResolventScanResult resolvent_bound_scan(const OperatorSpec& spec,
                                         const std::vector<std::complex<double>>& lambda_grid,
                                         const FrequencyGrid& xi_grid) {
    if (lambda_grid.empty() || xi_grid.radii.empty() || xi_grid.directions.empty())
        throw std::invalid_argument("resolvent_bound_scan: grids must be nonempty");
    const auto times = coefficient_time_samples(spec, 1);
    const int n = spec.system_size();
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);

    ResolventScanResult result;
    result.worst_xi = Eigen::VectorXd::Zero(spec.dim());
    for (double t : times) {
        for (double r : xi_grid.radii) {
            const double weight = std::pow(r, 2 * spec.half_order());
            for (const auto& dir : xi_grid.directions) {
                const Eigen::VectorXd xi = r * dir;
                const Eigen::MatrixXcd symbol = principal_symbol(spec, t, xi);
                for (const auto& lambda : lambda_grid) {
                    Eigen::FullPivLU<Eigen::MatrixXcd> lu(symbol + lambda * ident);
                    if (!lu.isInvertible()) {
                        result.singular = true;
                        result.c_observed = std::numeric_limits<double>::infinity();
                        result.worst_lambda = lambda;
                        result.worst_xi = xi;
                        result.worst_time = t;
                        return result;
                    }
                    const double candidate =
                        spectral_norm(lu.inverse()) * (weight + std::abs(lambda));
                    if (candidate > result.c_observed) {
                        result.c_observed = candidate;
                        result.worst_lambda = lambda;
                        result.worst_xi = xi;
                        result.worst_time = t;
                    }
                }
            }
        }
    }
    return result;
}

std::vector<std::complex<double>> sector_lambda_grid(double theta, double modulus_min,
                                                     double modulus_max, int per_ray) {
    if (!(0.0 < theta && theta < M_PI))
        throw std::invalid_argument("sector_lambda_grid: theta out of range");
    if (!(0.0 < modulus_min && modulus_min < modulus_max) || per_ray < 2)
        throw std::invalid_argument("sector_lambda_grid: bad modulus range");
    // stay strictly inside the open sector
    const double boundary = (M_PI - theta) * (1.0 - 1e-9);
    const double args[3] = {-boundary, 0.0, boundary};
    std::vector<std::complex<double>> grid;
    const double step = std::log(modulus_max / modulus_min) / (per_ray - 1);
    for (double arg : args)
        for (int i = 0; i < per_ray; ++i)
            grid.push_back(std::polar(modulus_min * std::exp(i * step), arg));
    return grid;
}

namespace {

double mihlin_pass(const OperatorSpec& spec, double frozen_time, std::complex<double> lambda,
                   const MultiIndex& beta, double exponent, const MultiIndex& alpha,
                   const FrequencyGrid& grid) {
    const int n = spec.system_size();
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const std::complex<double> lambda_pow = std::pow(lambda, exponent);
    auto multiplier = [&](const Eigen::VectorXd& xi) -> Eigen::MatrixXcd {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(principal_symbol(spec, frozen_time, xi) +
                                              lambda * ident);
        if (!lu.isInvertible())
            throw numeric_error("mihlin_constant_scan: singular resolvent in the grid");
        return lambda_pow * monomial(xi, beta) * lu.inverse();
    };

    double constant = 0.0;
    for (double r : grid.radii) {
        const double weight = std::pow(r, order(alpha));
        for (const auto& dir : grid.directions) {
            const Eigen::VectorXd xi = r * dir;
            const Eigen::MatrixXcd d =
                order(alpha) == 0 ? multiplier(xi)
                                  : finite_difference_derivative(multiplier, xi, alpha);
            constant = std::max(constant, weight * spectral_norm(d));
        }
    }
    return constant;
}

}  // namespace

MihlinScanReport mihlin_constant_scan(const OperatorSpec& spec, double frozen_time,
                                      std::complex<double> lambda, const MultiIndex& beta,
                                      int max_order, ExponentConvention convention,
                                      const FrequencyGrid& xi_grid) {
    const int m = spec.half_order();
    const int limit = convention == ExponentConvention::paper ? m : 2 * m;
    if (order(beta) > limit)
        throw std::invalid_argument("mihlin_constant_scan: |beta| exceeds the convention limit");
    if (lambda == std::complex<double>(0.0, 0.0))
        throw std::invalid_argument("mihlin_constant_scan: lambda must be nonzero");
    if (max_order < 0) throw std::invalid_argument("mihlin_constant_scan: max_order must be >= 0");

    const double denom = convention == ExponentConvention::paper ? m : 2.0 * m;
    const double exponent = 1.0 - order(beta) / denom;
    const FrequencyGrid fine = xi_grid.refined();

    MihlinScanReport report;
    report.convention = convention;
    report.beta = beta;
    report.lambda = lambda;
    report.frozen_time = frozen_time;
    report.all_stable = true;
    for (int k = 0; k <= max_order; ++k) {
        MihlinScanRow row;
        row.derivative_order = k;
        for (const auto& alpha : indices_of_order(spec.dim(), k)) {
            row.constant = std::max(
                row.constant, mihlin_pass(spec, frozen_time, lambda, beta, exponent, alpha, xi_grid));
            row.refined_constant = std::max(
                row.refined_constant,
                mihlin_pass(spec, frozen_time, lambda, beta, exponent, alpha, fine));
        }
        row.relative_change = std::abs(row.refined_constant - row.constant) /
                              std::max(row.constant, 1e-300);
        row.stable = row.relative_change <= 0.05;
        report.all_stable = report.all_stable && row.stable;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace evofam
