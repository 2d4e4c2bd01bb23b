#include "evofam/finite_difference.hpp"

#include <algorithm>
#include <stdexcept>

namespace evofam {

namespace {

using MatrixFn = std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>;

Eigen::MatrixXcd derive(const MatrixFn& f, const Eigen::VectorXd& xi, MultiIndex gamma,
                        double h) {
    int axis = -1;
    for (std::size_t j = 0; j < gamma.size(); ++j)
        if (gamma[j] > 0) {
            axis = static_cast<int>(j);
            break;
        }
    if (axis < 0) return f(xi);
    --gamma[static_cast<std::size_t>(axis)];

    auto shifted = [&](double offset) {
        Eigen::VectorXd y = xi;
        y[axis] += offset;
        if (offset != 0.0 && y[axis] == xi[axis])
            throw std::invalid_argument("finite_difference_derivative: step underflow relative to xi");
        return derive(f, y, gamma, h);
    };

    // 4th-order central stencil at step h, Richardson-combined with h/2.
    auto stencil = [&](double step) {
        return (-shifted(2.0 * step) + 8.0 * shifted(step) - 8.0 * shifted(-step) +
                shifted(-2.0 * step)) /
               (12.0 * step);
    };
    const Eigen::MatrixXcd coarse = stencil(h);
    const Eigen::MatrixXcd fine = stencil(0.5 * h);
    return (16.0 * fine - coarse) / 15.0;
}

}  // namespace

Eigen::MatrixXcd finite_difference_derivative(const MatrixFn& f, const Eigen::VectorXd& xi,
                                              const MultiIndex& gamma, double step_scale) {
    if (static_cast<Eigen::Index>(gamma.size()) != xi.size())
        throw std::invalid_argument("finite_difference_derivative: dimension mismatch");
    const double h = step_scale * std::max(xi.norm(), 1.0);
    return derive(f, xi, gamma, h);
}

}  // namespace evofam
