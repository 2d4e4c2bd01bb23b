#include "evofam/quadrature.hpp"

#include <cmath>

#include "evofam/errors.hpp"

namespace evofam {

namespace {

constexpr int kMaxDepth = 40;

double simpson_scalar(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_scalar(const std::function<double(double)>& f, double a, double fa,
                       double b, double fb, double m, double fm, double whole,
                       double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_scalar(f, a, fa, m, fm, lm, flm);
    const double right = simpson_scalar(f, m, fm, b, fb, rm, frm);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth >= kMaxDepth)
        throw numeric_error("adaptive_simpson: no convergence at depth limit");
    return adaptive_scalar(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
           adaptive_scalar(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

Eigen::MatrixXcd simpson_matrix(double a, const Eigen::MatrixXcd& fa, double b,
                                const Eigen::MatrixXcd& fb, const Eigen::MatrixXcd& fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Eigen::MatrixXcd adaptive_matrix(const std::function<Eigen::MatrixXcd(double)>& f,
                                 double a, const Eigen::MatrixXcd& fa, double b,
                                 const Eigen::MatrixXcd& fb, double m,
                                 const Eigen::MatrixXcd& fm, const Eigen::MatrixXcd& whole,
                                 double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const Eigen::MatrixXcd flm = f(lm), frm = f(rm);
    const Eigen::MatrixXcd left = simpson_matrix(a, fa, m, fm, flm);
    const Eigen::MatrixXcd right = simpson_matrix(m, fm, b, fb, frm);
    const Eigen::MatrixXcd err = left + right - whole;
    if (err.cwiseAbs().maxCoeff() <= 15.0 * tol) return left + right + err / 15.0;
    if (depth >= kMaxDepth)
        throw numeric_error("adaptive_simpson_matrix: no convergence at depth limit");
    return adaptive_matrix(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
           adaptive_matrix(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson_scalar(f, a, fa, b, fb, m, fm);
    return adaptive_scalar(f, a, fa, b, fb, m, fm, whole, abs_tol, 0);
}

Eigen::MatrixXcd adaptive_simpson_matrix(
    const std::function<Eigen::MatrixXcd(double)>& f, double a, double b, double abs_tol) {
    const Eigen::MatrixXcd fa = f(a);
    if (b <= a) return Eigen::MatrixXcd::Zero(fa.rows(), fa.cols());
    const double m = 0.5 * (a + b);
    const Eigen::MatrixXcd fb = f(b), fm = f(m);
    const Eigen::MatrixXcd whole = simpson_matrix(a, fa, b, fb, fm);
    return adaptive_matrix(f, a, fa, b, fb, m, fm, whole, abs_tol, 0);
}

}  // namespace evofam
