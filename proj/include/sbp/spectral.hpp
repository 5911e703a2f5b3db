#pragma once

#include <Eigen/Dense>

#include <functional>

namespace sbp {

// max |lambda| of a square matrix. Dense eigensolve up to 2000 rows, power
// iteration on M and M^T above that.
double spectral_radius(const Eigen::MatrixXd& M);

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Power-iteration estimate from products with M and M^T.
double spectral_radius_power(int n, const MatVec& apply, const MatVec& apply_transpose,
                             double rel_tol = 1e-8, int max_iter = 200000);

} // namespace sbp
