#include "evofam/operator_spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "evofam/errors.hpp"
#include "evofam/linalg.hpp"

namespace evofam {

namespace {

std::vector<double> sorted_union(const std::set<double>& s) {
    return std::vector<double>(s.begin(), s.end());
}

}  // namespace

OperatorSpec::OperatorSpec(int half_order, int dim, int system_size, CoefficientMap coefficients,
                           bool divergence_form, std::function<double(double)> continuity_modulus)
    : m_(half_order),
      d_(dim),
      n_(system_size),
      coefficients_(std::move(coefficients)),
      divergence_form_(divergence_form),
      continuity_modulus_(std::move(continuity_modulus)) {
    if (m_ <= 0 || d_ <= 0 || n_ <= 0)
        throw std::invalid_argument("OperatorSpec: m, d, N must be positive");
    bool has_principal = false;
    std::set<double> principal, all;
    for (const auto& [key, path] : coefficients_) {
        const auto& [alpha, beta] = key;
        if (static_cast<int>(alpha.size()) != d_ || static_cast<int>(beta.size()) != d_)
            throw std::invalid_argument("OperatorSpec: multi-index dimension mismatch");
        if (order(alpha) > m_ || order(beta) > m_)
            throw std::invalid_argument("OperatorSpec: multi-index order exceeds m");
        if (path.dim() != n_)
            throw std::invalid_argument("OperatorSpec: coefficient matrix size mismatch");
        const bool top = order(alpha) == m_ && order(beta) == m_;
        has_principal = has_principal || top;
        for (double b : path.breakpoints()) {
            all.insert(b);
            if (top) principal.insert(b);
        }
    }
    if (!has_principal)
        throw std::invalid_argument("OperatorSpec: principal part is empty");
    principal_breakpoints_ = sorted_union(principal);
    all_breakpoints_ = sorted_union(all);
}

double OperatorSpec::coefficient_bound() const {
    double k = 0.0;
    for (const auto& [key, path] : coefficients_) k = std::max(k, path.norm_bound());
    return k;
}

OperatorSpec OperatorSpec::subtract_laplacian_power(double delta) const {
    // |xi|^{2m} = sum_{|mu|=m} (m! / mu!) xi^{2mu}
    CoefficientMap shifted = coefficients_;
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n_, n_);
    for (const auto& mu : indices_of_order(d_, m_)) {
        double multinom = 1.0;
        for (int k = 2; k <= m_; ++k) multinom *= k;
        for (int c : mu)
            for (int k = 2; k <= c; ++k) multinom /= k;
        const Eigen::MatrixXcd shift = -delta * multinom * ident;
        auto key = std::make_pair(mu, mu);
        auto it = shifted.find(key);
        if (it == shifted.end()) {
            shifted.emplace(key, CoefficientPath::constant(shift));
        } else {
            CoefficientPath updated = it->second.shifted_by(shift);
            shifted.erase(it);
            shifted.emplace(key, std::move(updated));
        }
    }
    return OperatorSpec(m_, d_, n_, std::move(shifted), divergence_form_, continuity_modulus_);
}

OperatorSpec OperatorSpec::adjoint_reversed(double anchor) const {
    CoefficientMap reversed;
    for (const auto& [key, path] : coefficients_)
        reversed.emplace(key, path.adjoint_reversed(anchor));
    return OperatorSpec(m_, d_, n_, std::move(reversed), divergence_form_, continuity_modulus_);
}

Eigen::MatrixXcd principal_symbol(const OperatorSpec& spec, double t, const Eigen::VectorXd& xi) {
    if (xi.size() != spec.dim())
        throw std::invalid_argument("principal_symbol: xi dimension mismatch");
    const int n = spec.system_size();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [key, path] : spec.coefficients()) {
        const auto& [alpha, beta] = key;
        if (order(alpha) != spec.half_order() || order(beta) != spec.half_order()) continue;
        sum += monomial(xi, alpha) * monomial(xi, beta) * path.at(t);
    }
    return sum;
}

Eigen::MatrixXcd full_symbol(const OperatorSpec& spec, double t, const Eigen::VectorXd& xi) {
    if (xi.size() != spec.dim())
        throw std::invalid_argument("full_symbol: xi dimension mismatch");
    const int n = spec.system_size();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [key, path] : spec.coefficients())
        sum += monomial(xi, key.first) * monomial(xi, key.second) * path.at(t);
    return sum;
}

Eigen::MatrixXcd principal_symbol_derivative(const OperatorSpec& spec, double t,
                                             const Eigen::VectorXd& xi, const MultiIndex& eta) {
    if (xi.size() != spec.dim() || static_cast<int>(eta.size()) != spec.dim())
        throw std::invalid_argument("principal_symbol_derivative: dimension mismatch");
    const int n = spec.system_size();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [key, path] : spec.coefficients()) {
        const auto& [alpha, beta] = key;
        if (order(alpha) != spec.half_order() || order(beta) != spec.half_order()) continue;
        const MultiIndex nu = add(alpha, beta);
        const double factor = falling_factorial(nu, eta);
        if (factor == 0.0) continue;
        sum += factor * monomial(xi, subtract(nu, eta)) * path.at(t);
    }
    return sum;
}

namespace {

double radical_inverse(int base, int index) {
    double inv = 1.0 / base, result = 0.0, frac = inv;
    while (index > 0) {
        result += frac * (index % base);
        index /= base;
        frac *= inv;
    }
    return result;
}

constexpr int kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

std::vector<Eigen::VectorXd> unit_sphere_samples(int dim, int count) {
    if (dim <= 0 || count < 1)
        throw std::invalid_argument("unit_sphere_samples: bad arguments");
    if (dim > 8)
        throw std::invalid_argument("unit_sphere_samples: dimension too large");
    std::vector<Eigen::VectorXd> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < dim && static_cast<int>(samples.size()) < count; ++j)
        samples.push_back(Eigen::VectorXd::Unit(dim, j));
    for (int index = 1; static_cast<int>(samples.size()) < count; ++index) {
        Eigen::VectorXd x(dim);
        for (int j = 0; j < dim; ++j) x[j] = 2.0 * radical_inverse(kHaltonBases[j], index) - 1.0;
        const double norm = x.norm();
        if (norm < 1e-3) continue;
        samples.push_back(x / norm);
    }
    return samples;
}

std::vector<double> coefficient_time_samples(const OperatorSpec& spec, int extra) {
    const auto& breaks = spec.all_breakpoints();
    std::vector<double> samples;
    if (breaks.empty()) {
        samples.push_back(0.0);
    } else {
        samples.push_back(breaks.front() - 1.0);
        for (std::size_t i = 1; i < breaks.size(); ++i)
            samples.push_back(0.5 * (breaks[i - 1] + breaks[i]));
        samples.push_back(breaks.back() + 1.0);
    }
    const double lo = samples.front(), hi = samples.back();
    for (int i = 1; i <= extra; ++i)
        samples.push_back(lo + (hi - lo) * radical_inverse(2, i));
    return samples;
}

namespace {

struct SampledSpectra {
    double kappa_lh = std::numeric_limits<double>::infinity();
    double kappa_spec = std::numeric_limits<double>::infinity();
    double theta0 = 0.0;
    double k_bound = 0.0;
};

SampledSpectra scan_symbol(const OperatorSpec& spec, const std::vector<double>& times,
                           const std::vector<Eigen::VectorXd>& dirs, bool need_spectrum) {
    SampledSpectra out;
    for (double t : times) {
        for (const auto& xi : dirs) {
            const Eigen::MatrixXcd a = principal_symbol(spec, t, xi);
            out.k_bound = std::max(out.k_bound, spectral_norm(a));
            out.kappa_lh = std::min(out.kappa_lh, hermitian_part_min_eigenvalue(a));
            if (!need_spectrum) continue;
            std::ostringstream ctx;
            ctx << "principal symbol at t=" << t << ", xi=" << xi.transpose();
            const Eigen::VectorXcd ev = eigenvalues_checked(a, ctx.str());
            for (Eigen::Index i = 0; i < ev.size(); ++i) {
                out.kappa_spec = std::min(out.kappa_spec, std::abs(ev[i]));
                out.theta0 = std::max(out.theta0, std::abs(principal_argument(ev[i])));
            }
        }
    }
    return out;
}

double derived_angle(double kappa_lh, double k_bound) {
    if (kappa_lh <= 0.0 || k_bound <= 0.0) return M_PI;
    const double c = std::min(1.0, kappa_lh / k_bound);
    return std::acos(c);
}

}  // namespace

EllipticityCertificate check_legendre_hadamard(const OperatorSpec& spec, int sphere_samples,
                                               int time_samples) {
    if (sphere_samples < 1 || time_samples < 1)
        throw std::invalid_argument("check_legendre_hadamard: sample counts must be >= 1");
    const auto dirs = unit_sphere_samples(spec.dim(), sphere_samples);
    const auto times = coefficient_time_samples(spec, time_samples);
    const auto scan = scan_symbol(spec, times, dirs, /*need_spectrum=*/false);

    EllipticityCertificate cert;
    cert.kappa_lh = scan.kappa_lh;
    // Every eigenvalue lambda satisfies Re lambda >= kappa_lh, so |lambda|
    // >= kappa_lh is a valid spectral lower bound.
    cert.kappa_spec = scan.kappa_lh;
    cert.k_bound = scan.k_bound;
    cert.theta = derived_angle(scan.kappa_lh, scan.k_bound);
    cert.theta0 = cert.theta;
    cert.sphere_samples = static_cast<int>(dirs.size());
    cert.time_samples = static_cast<int>(times.size());
    cert.passed = scan.kappa_lh > 0.0;
    return cert;
}

EllipticityCertificate check_uniform_ellipticity(const OperatorSpec& spec, int sphere_samples,
                                                 int time_samples) {
    if (sphere_samples < 1 || time_samples < 1)
        throw std::invalid_argument("check_uniform_ellipticity: sample counts must be >= 1");
    const auto dirs = unit_sphere_samples(spec.dim(), sphere_samples);
    const auto times = coefficient_time_samples(spec, time_samples);
    const auto scan = scan_symbol(spec, times, dirs, /*need_spectrum=*/true);

    EllipticityCertificate cert;
    cert.kappa_lh = scan.kappa_lh;
    cert.kappa_spec = scan.kappa_spec;
    cert.theta0 = scan.theta0;
    cert.k_bound = scan.k_bound;
    cert.theta = derived_angle(scan.kappa_lh, scan.k_bound);
    cert.sphere_samples = static_cast<int>(dirs.size());
    cert.time_samples = static_cast<int>(times.size());
    // Sector membership with a closed-sector slack.
    cert.passed = scan.kappa_spec > 0.0 && scan.theta0 < M_PI - 1e-12;
    // Positivity of the Hermitian part forces the spectrum into the derived
    // sector; a violation would indicate an eigensolver inconsistency.
    if (scan.kappa_lh > 0.0 && scan.theta0 > cert.theta + 1e-9)
        throw numeric_error("check_uniform_ellipticity: spectrum escapes the derived sector");
    return cert;
}

}  // namespace evofam
