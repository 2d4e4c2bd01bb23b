#pragma once

#include <functional>

#include <Eigen/Core>

#include "evofam/multi_index.hpp"

namespace evofam {

// D^gamma F(xi) for a smooth matrix-valued F, by nested 4th-order central
// stencils with one Richardson extrapolation level per coordinate.  The base
// step is step_scale * max(|xi|, 1).  Throws std::invalid_argument when the
// step underflows relative to xi (xi_j + h == xi_j).
Eigen::MatrixXcd finite_difference_derivative(
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& xi, const MultiIndex& gamma, double step_scale = 1e-3);

}  // namespace evofam
