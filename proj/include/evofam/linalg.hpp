#pragma once

#include <complex>

#include <Eigen/Core>

namespace evofam {

// Operator (spectral) norm: largest singular value.  This is the matrix norm
// used throughout the library.
double spectral_norm(const Eigen::MatrixXcd& a);

// Eigenvalues of a general complex matrix; throws numeric_error with the
// given context string if the eigensolver does not converge.
Eigen::VectorXcd eigenvalues_checked(const Eigen::MatrixXcd& a, const std::string& context);

// Smallest eigenvalue of the Hermitian part (a + a^*)/2.
double hermitian_part_min_eigenvalue(const Eigen::MatrixXcd& a);

// Argument of z in (-pi, pi].
double principal_argument(std::complex<double> z);

}  // namespace evofam
