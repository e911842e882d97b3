#include "kernoil/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kernoil {

namespace {

/// Per-shock contributions to the h-step forecast error variance of every
/// variable: contrib(i, j) = sum_{k<h} Theta_k(i,j)^2.
Eigen::MatrixXd truncated_mse_contributions(const MaSequence& ma, int h) {
    const int n = ma.n();
    Eigen::MatrixXd contrib = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < h; ++k) {
        contrib += ma.theta[static_cast<std::size_t>(k)].array().square().matrix();
    }
    return contrib;
}

/// Solve S = Q + F S F' by doubling; converges geometrically for stable F.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& f, const Eigen::MatrixXd& q,
                                        double tol) {
    Eigen::MatrixXd s = q;
    Eigen::MatrixXd g = f;
    for (int iter = 0; iter < 200; ++iter) {
        s = (s + g * s * g.transpose()).eval();
        g = (g * g).eval();
        if (g.cwiseAbs().maxCoeff() < 1e-154) break;  // squaring next would underflow anyway
        const double resid = (s - f * s * f.transpose() - q).cwiseAbs().maxCoeff();
        if (resid < tol * std::max(1.0, s.cwiseAbs().maxCoeff())) break;
    }
    const double resid = (s - f * s * f.transpose() - q).cwiseAbs().maxCoeff();
    if (resid > tol * std::max(1.0, s.cwiseAbs().maxCoeff())) {
        throw std::runtime_error("fevd: Lyapunov fixed point did not converge");
    }
    return s;
}

/// Infinite-horizon variance contributions via the companion form.
Eigen::MatrixXd lyapunov_mse_contributions(const VarModel& model, const Eigen::MatrixXd& b0inv) {
    const int n = model.n();
    const int np = n * model.p;
    const Eigen::MatrixXd f = companion(model).F;
    Eigen::MatrixXd contrib(n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(np, np);
        q.topLeftCorner(n, n) = b0inv.col(j) * b0inv.col(j).transpose();
        const Eigen::MatrixXd s = solve_discrete_lyapunov(f, q, 1e-12);
        contrib.col(j) = s.topLeftCorner(n, n).diagonal();
    }
    return contrib;
}

Eigen::Index shock_index(const std::vector<std::string>& labels, const std::string& name) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] == name) return static_cast<Eigen::Index>(j);
    }
    throw std::invalid_argument("unknown shock label '" + name + "'");
}

}  // namespace

MaSequence ma_coefficients(const VarModel& model, const Eigen::MatrixXd& b0inv, int horizon) {
    if (horizon < 0) throw std::invalid_argument("ma_coefficients: negative horizon");
    const int n = model.n();
    std::vector<Eigen::MatrixXd> phi;
    phi.reserve(static_cast<std::size_t>(horizon) + 1);
    phi.push_back(Eigen::MatrixXd::Identity(n, n));
    for (int h = 1; h <= horizon; ++h) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i <= std::min(h, model.p); ++i) {
            acc += model.coeffs[static_cast<std::size_t>(i - 1)] * phi[static_cast<std::size_t>(h - i)];
        }
        phi.push_back(std::move(acc));
    }
    MaSequence ma;
    ma.theta.reserve(phi.size());
    for (auto& m : phi) ma.theta.push_back(m * b0inv);
    return ma;
}

IrfSet impulse_responses(const MaSequence& ma, const std::vector<bool>& cumulate,
                         const Eigen::VectorXd& signs) {
    const int n = ma.n();
    const int h_max = ma.horizon();
    if (static_cast<int>(cumulate.size()) != n) {
        throw std::invalid_argument("impulse_responses: cumulate flag count mismatch");
    }
    if (signs.size() != n) throw std::invalid_argument("impulse_responses: sign count mismatch");

    IrfSet irf;
    irf.cumulative = cumulate;
    irf.signs = signs;
    irf.responses.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, h_max + 1));
    for (int j = 0; j < n; ++j) {
        auto& resp = irf.responses[static_cast<std::size_t>(j)];
        for (int h = 0; h <= h_max; ++h) {
            resp.col(h) = signs[j] * ma.theta[static_cast<std::size_t>(h)].col(j);
        }
        for (int i = 0; i < n; ++i) {
            if (!cumulate[static_cast<std::size_t>(i)]) continue;
            for (int h = 1; h <= h_max; ++h) resp(i, h) += resp(i, h - 1);
        }
    }
    return irf;
}

FevdTable fevd(const VarModel& model, const Eigen::MatrixXd& b0inv, const std::vector<int>& horizons) {
    if (horizons.empty()) throw std::invalid_argument("fevd: no horizons requested");
    int h_max = 0;
    bool want_infinite = false;
    for (int h : horizons) {
        if (h == kInfiniteHorizon) {
            want_infinite = true;
        } else if (h < 1) {
            throw std::invalid_argument("fevd: horizons must be >= 1");
        } else {
            h_max = std::max(h_max, h);
        }
    }
    if (want_infinite && !is_stable(companion(model))) {
        throw std::runtime_error("fevd: infinite horizon requires a stable model");
    }

    const int n = model.n();
    const MaSequence ma = ma_coefficients(model, b0inv, h_max > 0 ? h_max - 1 : 0);

    FevdTable table;
    table.horizons = horizons;
    table.shares.assign(static_cast<std::size_t>(n),
                        Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(horizons.size())));
    for (std::size_t c = 0; c < horizons.size(); ++c) {
        const int h = horizons[c];
        const Eigen::MatrixXd contrib = (h == kInfiniteHorizon)
                                            ? lyapunov_mse_contributions(model, b0inv)
                                            : truncated_mse_contributions(ma, h);
        for (int i = 0; i < n; ++i) {
            const double total = contrib.row(i).sum();
            table.shares[static_cast<std::size_t>(i)].col(static_cast<Eigen::Index>(c)) =
                contrib.row(i).transpose() * (100.0 / total);
        }
    }
    return table;
}

HistDecomp historical_decomposition(const VarModel& model, const StructuralModel& structural,
                                    const TimeSeriesFrame& panel, bool demean) {
    const int n = model.n();
    const Eigen::Index t_eff = model.t_eff();
    if (structural.shocks.rows() != t_eff) {
        throw std::invalid_argument("historical_decomposition: shock sample does not match model");
    }
    if (panel.rows() != t_eff + model.p) {
        throw std::invalid_argument("historical_decomposition: panel does not match the fitted sample");
    }

    const MaSequence ma = ma_coefficients(model, structural.b0inv, static_cast<int>(t_eff) - 1);

    HistDecomp hd;
    hd.start = model.sample_start;
    hd.freq = model.freq;
    hd.labels = structural.labels;
    hd.observed = panel.values.bottomRows(t_eff);
    if (demean) {
        const Eigen::RowVectorXd means = hd.observed.colwise().mean();
        hd.observed.rowwise() -= means;
    }
    hd.contributions.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(t_eff, n));
    for (int j = 0; j < n; ++j) {
        auto& contrib = hd.contributions[static_cast<std::size_t>(j)];
        for (Eigen::Index t = 0; t < t_eff; ++t) {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
            for (Eigen::Index k = 0; k <= t; ++k) {
                acc += ma.theta[static_cast<std::size_t>(k)].col(j) * structural.shocks(t - k, j);
            }
            contrib.row(t) = acc.transpose();
        }
    }
    hd.base = hd.observed;
    for (const auto& contrib : hd.contributions) hd.base -= contrib;
    return hd;
}

CounterfactualPath counterfactual_levels(const HistDecomp& hd, const CounterfactualSpec& spec) {
    if (spec.window.first > spec.window.last) {
        throw std::invalid_argument("counterfactual_levels: empty window");
    }
    const int step = step_months(hd.freq);
    const int offset = months_between(hd.start, spec.window.first);
    if (offset < 0 || offset % step != 0) {
        throw std::invalid_argument("counterfactual_levels: window starts outside the effective sample");
    }
    const Eigen::Index first = offset / step;
    const Eigen::Index len = months_between(spec.window.first, spec.window.last) / step + 1;
    if (first + len > hd.t_eff()) {
        throw std::invalid_argument("counterfactual_levels: window ends outside the effective sample");
    }
    const Eigen::Index removed =
        spec.remove.empty() ? -1 : shock_index(hd.labels, spec.remove);

    CounterfactualPath path;
    path.start = spec.window.first;
    path.freq = hd.freq;
    path.shock_removed = spec.remove;
    path.levels.resize(len);
    path.growth = Eigen::VectorXd::Zero(len);
    path.levels[0] = spec.base_level;
    for (Eigen::Index t = 1; t < len; ++t) {
        const Eigen::Index row = first + t;
        double g;
        if (spec.paper_convention) {
            // Rebuild growth from the moving-average terms of the kept shocks,
            // then restore the window-average growth the zero-mean form drops.
            g = spec.mean_growth;
            for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(hd.contributions.size()); ++j) {
                if (j == removed) continue;
                g += hd.contributions[static_cast<std::size_t>(j)](row, spec.variable);
            }
        } else {
            g = hd.observed(row, spec.variable);
            if (removed >= 0) g -= hd.contributions[static_cast<std::size_t>(removed)](row, spec.variable);
        }
        path.growth[t] = g;
        path.levels[t] = spec.compounding == Compounding::log_growth
                             ? path.levels[t - 1] * std::exp(g)
                             : path.levels[t - 1] * (1.0 + g);
    }
    return path;
}

}  // namespace kernoil
