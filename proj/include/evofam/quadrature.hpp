#pragma once

#include <functional>

#include <Eigen/Core>

namespace evofam {

// Adaptive Simpson quadrature with an absolute tolerance.  Throws
// numeric_error when the recursion depth limit is reached without
// convergence.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

// Same scheme for a matrix-valued integrand; the error is measured entrywise
// in the max norm.
Eigen::MatrixXcd adaptive_simpson_matrix(
    const std::function<Eigen::MatrixXcd(double)>& f, double a, double b, double abs_tol);

}  // namespace evofam
