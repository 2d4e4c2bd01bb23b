#include "evofam/evolution_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evofam/linalg.hpp"
#include "evofam/parallel.hpp"
#include "evofam/symbol_propagator.hpp"

namespace evofam {

EvolutionOperator::EvolutionOperator(OperatorSpec spec, GridGeometry geometry, int cache_budget)
    : spec_(std::move(spec)), geometry_(geometry), transform_(geometry),
      cache_budget_(std::max(1, cache_budget)) {
    if (spec_.dim() != geometry_.dim)
        throw std::invalid_argument("EvolutionOperator: spec and grid dimension differ");
    if (spec_.system_size() != geometry_.components)
        throw std::invalid_argument("EvolutionOperator: spec and grid system size differ");
}

std::shared_ptr<const std::vector<Eigen::MatrixXcd>> EvolutionOperator::symbol_matrices(
    double s, double t) const {
    if (t < s) throw std::invalid_argument("EvolutionOperator: requires s <= t");
    const CacheKey key{s, t};
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            cache_order_.splice(cache_order_.begin(), cache_order_, it->second);
            return it->second->second;
        }
    }

    const int points = geometry_.total_points();
    const int n = geometry_.components;
    auto matrices = std::make_shared<std::vector<Eigen::MatrixXcd>>(
        static_cast<std::size_t>(points));
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    parallel_for(points, [&](int p) {
        (*matrices)[static_cast<std::size_t>(p)] =
            propagate_homogeneous(spec_, transform_.frequency(p), s, t, ident);
    });

    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second->second;
    cache_order_.emplace_front(key, matrices);
    cache_[key] = cache_order_.begin();
    while (static_cast<int>(cache_.size()) > cache_budget_) {
        cache_.erase(cache_order_.back().first);
        cache_order_.pop_back();
    }
    return matrices;
}

GridField EvolutionOperator::apply(double t, double s, const GridField& g) const {
    if (!(g.geometry() == geometry_))
        throw std::invalid_argument("EvolutionOperator: field geometry mismatch");
    if (t < s) throw std::invalid_argument("EvolutionOperator: requires s <= t");
    const auto matrices = symbol_matrices(s, t);
    GridField spectral = transform_.forward(g);
    const int points = geometry_.total_points();
    for (int p = 0; p < points; ++p)
        spectral.set_point_vector(
            p, (*matrices)[static_cast<std::size_t>(p)] * spectral.point_vector(p));
    return transform_.inverse(spectral);
}

GridField EvolutionOperator::apply_generator(double t, const GridField& g) const {
    if (!(g.geometry() == geometry_))
        throw std::invalid_argument("EvolutionOperator: field geometry mismatch");
    GridField spectral = transform_.forward(g);
    const int points = geometry_.total_points();
    for (int p = 0; p < points; ++p) {
        const Eigen::MatrixXcd a = principal_symbol(spec_, t, transform_.frequency(p));
        spectral.set_point_vector(p, a * spectral.point_vector(p));
    }
    return transform_.inverse(spectral);
}

void EvolutionOperator::clear_cache() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.clear();
    cache_order_.clear();
}

double check_cocycle(const EvolutionOperator& op, double s, double r, double t,
                     const GridField& g) {
    if (!(s <= r && r <= t)) throw std::invalid_argument("check_cocycle: needs s <= r <= t");
    const GridField composed = op.apply(t, r, op.apply(r, s, g));
    const GridField direct = op.apply(t, s, g);
    return (composed - direct).l2_norm() / g.l2_norm();
}

double check_derivative_commutation(const EvolutionOperator& op, double t, double s,
                                    const MultiIndex& alpha, const GridField& g,
                                    int max_order) {
    if (order(alpha) > max_order)
        throw std::invalid_argument("check_derivative_commutation: |alpha| exceeds maximum");
    const GridField left = spectral_derivative(op.transform(), op.apply(t, s, g), alpha);
    const GridField right = op.apply(t, s, spectral_derivative(op.transform(), g, alpha));
    return (left - right).l2_norm() / g.l2_norm();
}

DecayFit decay_exponent_fit(const EvolutionOperator& op, const MultiIndex& alpha, double s,
                            const std::vector<double>& t_grid) {
    const auto& transform = op.transform();
    const int points = op.geometry().total_points();
    const int n_half = op.geometry().points_per_axis / 2;

    std::vector<double> log_tau, log_norm;
    for (double t : t_grid) {
        if (!(t > s)) throw std::invalid_argument("decay_exponent_fit: times must exceed s");
        const auto matrices = op.symbol_matrices(s, t);
        double best = 0.0;
        int best_point = 0;
        for (int p = 0; p < points; ++p) {
            const double value = std::abs(monomial(transform.frequency(p), alpha)) *
                                 spectral_norm((*matrices)[static_cast<std::size_t>(p)]);
            if (value > best) {
                best = value;
                best_point = p;
            }
        }
        if (best <= 0.0) continue;
        const int kmax = transform.wavenumber_max_abs(best_point);
        // skip times where the sup sits at the frequency cutoff or, for a
        // genuine derivative, at the lowest nonzero shell
        if (kmax >= n_half) continue;
        if (order(alpha) > 0 && kmax <= 1) continue;
        log_tau.push_back(std::log(t - s));
        log_norm.push_back(std::log(best));
    }

    DecayFit fit;
    fit.used_points = static_cast<int>(log_tau.size());
    if (fit.used_points < 5) return fit;
    const double span = *std::max_element(log_tau.begin(), log_tau.end()) -
                        *std::min_element(log_tau.begin(), log_tau.end());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < log_tau.size(); ++i) {
        mean_x += log_tau[i];
        mean_y += log_norm[i];
    }
    mean_x /= fit.used_points;
    mean_y /= fit.used_points;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < log_tau.size(); ++i) {
        sxx += (log_tau[i] - mean_x) * (log_tau[i] - mean_x);
        sxy += (log_tau[i] - mean_x) * (log_norm[i] - mean_y);
    }
    fit.slope = sxy / sxx;
    fit.constant = std::exp(mean_y - fit.slope * mean_x);
    fit.conclusive = span >= std::log(10.0);  // at least one decade survives
    return fit;
}

namespace {

double distance_to_breakpoints(const std::vector<double>& breaks, double t) {
    double dist = std::numeric_limits<double>::infinity();
    for (double b : breaks) dist = std::min(dist, std::abs(t - b));
    return dist;
}

struct ResidualPair {
    double forward = 0.0;
    double backward = 0.0;
};

ResidualPair generator_residuals_at(const EvolutionOperator& op, const GridField& g, double s,
                                    double t, double h, bool one_sided) {
    const double g_norm = g.l2_norm();
    ResidualPair out;
    if (one_sided) {
        const GridField dt_num =
            (1.0 / h) * (op.apply(t + h, s, g) - op.apply(t, s, g));
        out.forward = (dt_num + op.apply_generator(t, op.apply(t, s, g))).l2_norm() / g_norm;
        const GridField ds_num =
            (1.0 / h) * (op.apply(t, s + h, g) - op.apply(t, s, g));
        out.backward =
            (ds_num - op.apply(t, s, op.apply_generator(s, g))).l2_norm() / g_norm;
        return out;
    }
    const GridField dt_num =
        (0.5 / h) * (op.apply(t + h, s, g) - op.apply(t - h, s, g));
    out.forward = (dt_num + op.apply_generator(t, op.apply(t, s, g))).l2_norm() / g_norm;
    const GridField ds_num =
        (0.5 / h) * (op.apply(t, s + h, g) - op.apply(t, s - h, g));
    out.backward = (ds_num - op.apply(t, s, op.apply_generator(s, g))).l2_norm() / g_norm;
    return out;
}

}  // namespace

GeneratorResiduals check_generator_relations(const EvolutionOperator& op, const GridField& g,
                                             double s, double t, double h) {
    if (!(h > 0.0) || !(t - s > 2.0 * h))
        throw std::invalid_argument("check_generator_relations: needs 0 < 2h < t - s");
    const auto& breaks = op.spec().principal_breakpoints();
    const bool one_sided = distance_to_breakpoints(breaks, t) <= 2.0 * h ||
                           distance_to_breakpoints(breaks, s) <= 2.0 * h;
    const ResidualPair coarse = generator_residuals_at(op, g, s, t, h, one_sided);
    const ResidualPair fine = generator_residuals_at(op, g, s, t, 0.5 * h, one_sided);

    GeneratorResiduals out;
    out.one_sided = one_sided;
    out.forward = fine.forward;
    out.backward = fine.backward;
    out.forward_order = std::log2(coarse.forward / fine.forward);
    out.backward_order = std::log2(coarse.backward / fine.backward);
    return out;
}

double check_adjoint_duality(const EvolutionOperator& op, double s, double t) {
    if (t < s) throw std::invalid_argument("check_adjoint_duality: requires s <= t");
    const OperatorSpec reversed = op.spec().adjoint_reversed(t);
    const auto matrices = op.symbol_matrices(s, t);
    const int points = op.geometry().total_points();
    const int n = op.geometry().components;
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    std::vector<double> errors(static_cast<std::size_t>(points), 0.0);
    parallel_for(points, [&](int p) {
        const Eigen::MatrixXcd w = propagate_homogeneous(
            reversed, op.transform().frequency(p), 0.0, t - s, ident);
        errors[static_cast<std::size_t>(p)] =
            spectral_norm((*matrices)[static_cast<std::size_t>(p)].adjoint() - w);
    });
    return *std::max_element(errors.begin(), errors.end());
}

double check_commutation_with_a0(const EvolutionOperator& op, double delta, double r, double t,
                                 double s, const GridField& g) {
    if (!(delta > 0.0)) throw std::invalid_argument("check_commutation_with_a0: delta must be > 0");
    if (r < 0.0) throw std::invalid_argument("check_commutation_with_a0: r must be >= 0");
    const EvolutionOperator shifted(op.spec().subtract_laplacian_power(delta), op.geometry());
    const int two_m = 2 * op.spec().half_order();
    auto heat_factor = [&](const Eigen::VectorXd& xi) {
        return std::complex<double>(std::exp(-r * delta * std::pow(xi.norm(), two_m)), 0.0);
    };
    const GridField left =
        shifted.apply(t, s, apply_scalar_multiplier(op.transform(), g, heat_factor));
    const GridField right =
        apply_scalar_multiplier(op.transform(), shifted.apply(t, s, g), heat_factor);
    return (left - right).l2_norm() / g.l2_norm();
}

}  // namespace evofam
