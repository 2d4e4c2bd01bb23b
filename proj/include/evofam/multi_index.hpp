#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace evofam {

// Multi-index in N^d.  Used for derivative orders and monomial exponents.
using MultiIndex = std::vector<int>;

// |alpha| = sum of the entries.
int order(const MultiIndex& alpha);

// xi^alpha = prod_i xi_i^{alpha_i}.
double monomial(const Eigen::VectorXd& xi, const MultiIndex& alpha);

// Componentwise a <= b.
bool component_le(const MultiIndex& a, const MultiIndex& b);

MultiIndex add(const MultiIndex& a, const MultiIndex& b);

// a - b; requires b <= a componentwise.
MultiIndex subtract(const MultiIndex& a, const MultiIndex& b);

// prod_i binomial(gamma_i, eta_i); the Leibniz coefficient for splitting
// D^gamma into D^eta * D^{gamma-eta}.
double multinomial(const MultiIndex& gamma, const MultiIndex& eta);

// prod_i nu_i!/(nu_i - eta_i)!; the coefficient in D^eta xi^nu.
// Returns 0 when eta is not componentwise <= nu.
double falling_factorial(const MultiIndex& nu, const MultiIndex& eta);

// All multi-indices of dimension dim with |alpha| == total, in a fixed
// deterministic order.
std::vector<MultiIndex> indices_of_order(int dim, int total);

// All multi-indices of dimension dim with |alpha| <= total.
std::vector<MultiIndex> indices_up_to(int dim, int total);

// All eta with eta <= gamma componentwise (including 0 and gamma).
std::vector<MultiIndex> sub_indices(const MultiIndex& gamma);

std::string to_string(const MultiIndex& alpha);

}  // namespace evofam
