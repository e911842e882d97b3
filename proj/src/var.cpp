#include "kernoil/var.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>

namespace kernoil {

namespace {

/// Stack [1, y_{t-1}, ..., y_{t-p}] regressor rows for t = p..T-1.
Eigen::MatrixXd lag_matrix(const Eigen::MatrixXd& y, int p) {
    const Eigen::Index T = y.rows();
    const Eigen::Index n = y.cols();
    const Eigen::Index t_eff = T - p;
    Eigen::MatrixXd x(t_eff, 1 + n * p);
    x.col(0).setOnes();
    for (int lag = 1; lag <= p; ++lag) {
        x.middleCols(1 + (lag - 1) * n, n) = y.middleRows(p - lag, t_eff);
    }
    return x;
}

}  // namespace

VarModel estimate_ols(const Eigen::MatrixXd& y, int p, Month start, Freq freq,
                      std::vector<std::string> names) {
    const Eigen::Index T = y.rows();
    const Eigen::Index n = y.cols();
    if (p < 1) throw std::invalid_argument("estimate_ols: lag order must be >= 1");
    const Eigen::Index k = n * p + 1;
    if (T - p <= k) {
        throw std::invalid_argument("estimate_ols: insufficient sample (T=" + std::to_string(T) +
                                    ", need > " + std::to_string(p + k) + " rows for p=" +
                                    std::to_string(p) + ")");
    }
    if (!y.allFinite()) throw std::invalid_argument("estimate_ols: panel contains missing values");

    const Eigen::MatrixXd x = lag_matrix(y, p);
    const Eigen::MatrixXd y_eff = y.bottomRows(T - p);

    // Orthogonal decomposition rather than normal equations, for conditioning.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < k) {
        throw std::runtime_error("estimate_ols: regressor matrix is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " of " + std::to_string(k) + ")");
    }
    const Eigen::MatrixXd beta = qr.solve(y_eff);  // k x n

    VarModel model;
    model.p = p;
    model.freq = freq;
    model.names = std::move(names);
    model.intercept = beta.row(0).transpose();
    model.coeffs.reserve(p);
    for (int lag = 0; lag < p; ++lag) {
        model.coeffs.push_back(beta.middleRows(1 + lag * n, n).transpose());
    }
    model.residuals = y_eff - x * beta;
    const double dof = static_cast<double>(T - p - k);
    model.sigma_u = (model.residuals.transpose() * model.residuals) / dof;
    // Exact symmetry so the Cholesky step downstream never sees rounding skew.
    model.sigma_u = ((model.sigma_u + model.sigma_u.transpose()) / 2.0).eval();
    model.sample_start = start.plus(p, freq);
    model.sample_end = start.plus(static_cast<int>(T) - 1, freq);
    return model;
}

VarModel estimate_ols(const TimeSeriesFrame& panel, int p) {
    panel.validate();
    if (panel.any_missing()) {
        throw std::invalid_argument("estimate_ols: panel contains missing values");
    }
    return estimate_ols(panel.values, p, panel.start, panel.freq, panel.names);
}

CompanionForm companion(const VarModel& model) {
    const int n = model.n();
    const int np = n * model.p;
    CompanionForm cf;
    cf.F = Eigen::MatrixXd::Zero(np, np);
    for (int lag = 0; lag < model.p; ++lag) {
        cf.F.block(0, lag * n, n, n) = model.coeffs[static_cast<std::size_t>(lag)];
    }
    if (model.p > 1) {
        cf.F.block(n, 0, np - n, np - n).setIdentity();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(cf.F, /*computeEigenvectors=*/false);
    cf.eigen_moduli.resize(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
        cf.eigen_moduli[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()[i]);
    }
    std::sort(cf.eigen_moduli.begin(), cf.eigen_moduli.end(), std::greater<>());
    return cf;
}

bool is_stable(const CompanionForm& cf, double tol) {
    return cf.max_modulus() < 1.0 - tol;
}

Eigen::MatrixXd fitted_plus_residuals(const VarModel& model, const Eigen::MatrixXd& y) {
    const Eigen::Index t_eff = y.rows() - model.p;
    Eigen::MatrixXd out(t_eff, y.cols());
    for (Eigen::Index t = 0; t < t_eff; ++t) {
        Eigen::VectorXd v = model.intercept;
        for (int lag = 1; lag <= model.p; ++lag) {
            v += model.coeffs[static_cast<std::size_t>(lag - 1)] *
                 y.row(model.p + t - lag).transpose();
        }
        out.row(t) = v.transpose() + model.residuals.row(t);
    }
    return out;
}

}  // namespace kernoil
