#include "kernoil/structural.hpp"

#include <cmath>
#include <stdexcept>

namespace kernoil {

const std::vector<std::string>& shock_labels() {
    static const std::vector<std::string> labels = {
        "oil-supply",
        "aggregate-demand",
        "oil-specific-demand",
        "regional-employment",
    };
    return labels;
}

CholeskyFactors cholesky_identify(const Eigen::MatrixXd& sigma_u) {
    const Eigen::Index n = sigma_u.rows();
    if (sigma_u.cols() != n) throw std::invalid_argument("cholesky_identify: matrix not square");
    const double scale = std::max(1.0, sigma_u.cwiseAbs().maxCoeff());
    if ((sigma_u - sigma_u.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument("cholesky_identify: covariance is not symmetric");
    }

    // Hand-rolled factorization so strict upper entries are exact zeros and
    // a failure can name the offending leading minor.
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = sigma_u(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0)) {
            throw std::runtime_error("cholesky_identify: leading minor of order " +
                                     std::to_string(j + 1) + " is not positive definite");
        }
        l(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            l(i, j) = (sigma_u(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
        }
    }
    return CholeskyFactors{l, Eigen::VectorXd::Ones(n)};
}

Eigen::MatrixXd structural_shocks(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& b0inv) {
    const Eigen::Index n = b0inv.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (b0inv(j, j) == 0.0) {
            throw std::runtime_error("structural_shocks: impact matrix is singular");
        }
    }
    // Lower-triangular solve per observation: b0inv w_t = u_t.
    return b0inv.triangularView<Eigen::Lower>()
        .solve(residuals.transpose())
        .transpose();
}

StructuralModel identify(const VarModel& model) {
    StructuralModel s;
    auto factors = cholesky_identify(model.sigma_u);
    s.b0inv = std::move(factors.b0inv);
    s.sigma_w = std::move(factors.sigma_w);
    s.shocks = structural_shocks(model.residuals, s.b0inv);
    s.labels = model.n() == 4 ? shock_labels() : std::vector<std::string>{};
    if (s.labels.empty()) {
        for (int j = 0; j < model.n(); ++j) s.labels.push_back("shock-" + std::to_string(j + 1));
    }
    s.sample_start = model.sample_start;
    s.freq = model.freq;
    return s;
}

SignConvention normalize_signs(const Eigen::MatrixXd& b0inv, Eigen::Index price_row) {
    if (price_row < 0 || price_row >= b0inv.rows()) {
        throw std::invalid_argument("normalize_signs: price row out of range");
    }
    SignConvention sc;
    sc.signs = Eigen::VectorXd::Ones(b0inv.cols());
    for (Eigen::Index j = 0; j < b0inv.cols(); ++j) {
        const double impact = b0inv(price_row, j);
        if (impact < 0.0) {
            sc.signs[j] = -1.0;
        } else if (impact == 0.0) {
            sc.zero_ties.push_back(static_cast<int>(j));
        }
    }
    return sc;
}

}  // namespace kernoil
