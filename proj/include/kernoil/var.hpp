#pragma once

#include "kernoil/series.hpp"

#include <vector>

namespace kernoil {

/// Reduced-form VAR(p) with intercept, estimated equation by equation
/// with least squares. Immutable once estimated.
struct VarModel {
    int p = 0;
    Eigen::VectorXd intercept;            // n
    std::vector<Eigen::MatrixXd> coeffs;  // A_1..A_p, each n x n
    Eigen::MatrixXd residuals;            // T_eff x n
    Eigen::MatrixXd sigma_u;              // n x n, dof adjusted: u'u / (T_eff - (n p + 1))
    Month sample_start;                   // first date of the effective sample
    Month sample_end;
    Freq freq = Freq::monthly;
    std::vector<std::string> names;

    int n() const { return static_cast<int>(intercept.size()); }
    Eigen::Index t_eff() const { return residuals.rows(); }
};

struct CompanionForm {
    Eigen::MatrixXd F;                 // (n p) x (n p) stacked companion matrix
    std::vector<double> eigen_moduli;  // sorted descending

    double max_modulus() const { return eigen_moduli.empty() ? 0.0 : eigen_moduli.front(); }
};

/// Least squares on the matrix of observations (rows = time). The effective
/// sample loses the first p rows; sigma_u divides by T_eff - (n p + 1).
VarModel estimate_ols(const Eigen::MatrixXd& y, int p, Month start = Month{}, Freq freq = Freq::monthly,
                      std::vector<std::string> names = {});

VarModel estimate_ols(const TimeSeriesFrame& panel, int p);

CompanionForm companion(const VarModel& model);

/// True iff every companion eigenvalue modulus < 1 - tol.
bool is_stable(const CompanionForm& cf, double tol = 1e-9);

/// Fitted values plus residuals on the effective sample (equals the observed
/// rows up to rounding); used by diagnostics and tests.
Eigen::MatrixXd fitted_plus_residuals(const VarModel& model, const Eigen::MatrixXd& y);

}  // namespace kernoil
