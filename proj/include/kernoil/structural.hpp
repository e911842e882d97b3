#pragma once

#include "kernoil/var.hpp"

namespace kernoil {

/// Recursive (lower-triangular) structural model under the unit-variance
/// shock normalization: b0inv is the lower Cholesky factor of sigma_u and
/// sigma_w is the identity, so a one-standard-deviation shock is a unit shock.
struct StructuralModel {
    Eigen::MatrixXd b0inv;   // lower triangular, strictly positive diagonal
    Eigen::MatrixXd shocks;  // T_eff x n
    std::vector<std::string> labels;
    Eigen::VectorXd sigma_w;  // shock variances (all ones under this normalization)
    Month sample_start;
    Freq freq = Freq::monthly;
};

/// Shock labels matching the recursive ordering of the 4-variable system.
const std::vector<std::string>& shock_labels();

struct CholeskyFactors {
    Eigen::MatrixXd b0inv;
    Eigen::VectorXd sigma_w;
};

/// Lower Cholesky factorization of a symmetric positive definite covariance;
/// throws naming the failing leading minor when the input is not PD.
CholeskyFactors cholesky_identify(const Eigen::MatrixXd& sigma_u);

/// w_t = b0inv^{-1} u_t, row-wise over the residual matrix.
Eigen::MatrixXd structural_shocks(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& b0inv);

StructuralModel identify(const VarModel& model);

/// Orientation of each shock: +1/-1 so the impact response of the price-of-oil
/// row is nonnegative. Exactly-zero impacts tie to +1 and are reported.
struct SignConvention {
    Eigen::VectorXd signs;
    std::vector<int> zero_ties;
};

SignConvention normalize_signs(const Eigen::MatrixXd& b0inv, Eigen::Index price_row);

}  // namespace kernoil
