#include "evofam/matrix_exp.hpp"

#include <cmath>

#include <Eigen/LU>

#include "evofam/errors.hpp"

namespace evofam {

namespace {

// Pade(13,13) coefficients for exp, Higham's scaling-and-squaring form.
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// 1-norm threshold above which the argument is scaled down.
constexpr double kTheta13 = 5.371920351148152;

Eigen::MatrixXcd pade13(const Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a2 * a4;

    Eigen::MatrixXcd u =
        a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
             kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 + kPade13[1] * ident);
    Eigen::MatrixXcd v =
        a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
        kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * ident;

    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("matrix_exponential: matrix must be square");

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
    }

    Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXcd result = pade13(scaled);
    for (int i = 0; i < squarings; ++i) result = result * result;

    if (!result.allFinite())
        throw numeric_error("matrix_exponential: non-finite result (norm " +
                            std::to_string(norm1) + ")");
    return result;
}

Eigen::MatrixXcd exp_integral(const Eigen::MatrixXcd& a, double delta) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("exp_integral: matrix must be square");
    const Eigen::Index n = a.rows();
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = -delta * a;
    block.topRightCorner(n, n) = delta * Eigen::MatrixXcd::Identity(n, n);
    return matrix_exponential(block).topRightCorner(n, n);
}

}  // namespace evofam
