#pragma once

#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "evofam/grid_field.hpp"
#include "evofam/operator_spec.hpp"

namespace evofam {

// S(t, s) realized on a periodic grid: the per-frequency symbol flow
// v(t, s, xi_k) applied to the discrete Fourier coefficients.  Propagator
// matrices are cached per (s, t) with least-recently-used eviction; results
// do not depend on the cache state.
class EvolutionOperator {
public:
    EvolutionOperator(OperatorSpec spec, GridGeometry geometry, int cache_budget = 64);

    const OperatorSpec& spec() const { return spec_; }
    const GridGeometry& geometry() const { return geometry_; }
    const SpectralTransform& transform() const { return transform_; }

    // v(t, s, xi_k) for every grid frequency, flat-index order.
    std::shared_ptr<const std::vector<Eigen::MatrixXcd>> symbol_matrices(double s,
                                                                         double t) const;

    // u = S(t, s) g.
    GridField apply(double t, double s, const GridField& g) const;

    // u with spectral coefficients multiplied by the principal symbol
    // A_#(t, xi_k) (the generator application).
    GridField apply_generator(double t, const GridField& g) const;

    void clear_cache() const;

private:
    OperatorSpec spec_;
    GridGeometry geometry_;
    SpectralTransform transform_;
    int cache_budget_;

    using CacheKey = std::pair<double, double>;
    using CacheEntry = std::shared_ptr<const std::vector<Eigen::MatrixXcd>>;
    mutable std::mutex cache_mutex_;
    mutable std::list<std::pair<CacheKey, CacheEntry>> cache_order_;
    mutable std::map<CacheKey, std::list<std::pair<CacheKey, CacheEntry>>::iterator> cache_;
};

// || S(t,r) S(r,s) g - S(t,s) g ||_{L^2} / || g ||_{L^2} for s <= r <= t.
double check_cocycle(const EvolutionOperator& op, double s, double r, double t,
                     const GridField& g);

// || D^alpha S(t,s) g - S(t,s) D^alpha g || / || g || with the spectral
// derivative D^alpha.
double check_derivative_commutation(const EvolutionOperator& op, double t, double s,
                                    const MultiIndex& alpha, const GridField& g,
                                    int max_order = 8);

// Least-squares fit of log sup_k || xi_k^alpha v(t, s, xi_k) || against
// log(t - s).  Sample times where the argmax frequency sits at the grid
// cutoff (or at the smallest nonzero radius) are excluded; too few usable
// times marks the fit inconclusive.
struct DecayFit {
    double slope = 0.0;
    double constant = 0.0;  // exp of the fitted intercept
    bool conclusive = false;
    int used_points = 0;
};

DecayFit decay_exponent_fit(const EvolutionOperator& op, const MultiIndex& alpha, double s,
                            const std::vector<double>& t_grid);

// Difference-quotient residuals of the generator identities
//   D_t S(t,s) g = -A(t) S(t,s) g      (forward)
//   D_s S(t,s) g =  S(t,s) A(s) g      (backward)
// with the measured convergence order under h -> h/2.  Near a coefficient
// breakpoint one-sided differences are used and flagged (order drops to 1).
struct GeneratorResiduals {
    double forward = 0.0;
    double backward = 0.0;
    double forward_order = 0.0;
    double backward_order = 0.0;
    bool one_sided = false;
};

GeneratorResiduals check_generator_relations(const EvolutionOperator& op, const GridField& g,
                                             double s, double t, double h);

// Max over grid frequencies of || v(t,s,xi)^* - w(t-s, xi) || where w is the
// flow of the time-reversed adjoint symbol tau -> A_#(t - tau, xi)^* started
// at 0.
double check_adjoint_duality(const EvolutionOperator& op, double s, double t);

// Commutation of the evolution family of A(t) - delta (-Laplacian)^m with
// the semigroup e^{-r A_0}, A_0 = delta (-Laplacian)^m:
// || T(t,s) e^{-r A_0} g - e^{-r A_0} T(t,s) g || / || g ||.
double check_commutation_with_a0(const EvolutionOperator& op, double delta, double r, double t,
                                 double s, const GridField& g);

}  // namespace evofam
