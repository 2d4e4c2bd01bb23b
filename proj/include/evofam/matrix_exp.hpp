#pragma once

#include <Eigen/Core>

namespace evofam {

// exp(a) for a complex square matrix, by scaling-and-squaring with the
// degree-13 Pade approximant.  Throws numeric_error when the Pade solve
// produces non-finite entries.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a);

// int_0^delta exp(-sigma * a) dsigma, computed through the augmented-matrix
// identity exp([[ -delta*a, delta*I ], [0, 0]]) = [[ exp(-delta*a), J ], [0, I]].
// Well defined for singular a as well (the ODE right-hand side at xi = 0).
Eigen::MatrixXcd exp_integral(const Eigen::MatrixXcd& a, double delta);

}  // namespace evofam
