#include "evofam/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "evofam/errors.hpp"

namespace evofam {

double spectral_norm(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues()(0);
}

Eigen::VectorXcd eigenvalues_checked(const Eigen::MatrixXcd& a, const std::string& context) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eigensolver failed: " + context);
    return solver.eigenvalues();
}

double hermitian_part_min_eigenvalue(const Eigen::MatrixXcd& a) {
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("hermitian eigensolver failed");
    return solver.eigenvalues().minCoeff();
}

double principal_argument(std::complex<double> z) {
    double a = std::arg(z);
    // std::arg returns (-pi, pi]; keep -pi mapped to pi for the closed sector
    if (a == -M_PI) a = M_PI;
    return a;
}

}  // namespace evofam
