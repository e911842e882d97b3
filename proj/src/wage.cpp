#include "kernoil/wage.hpp"

#include "kernoil/rng.hpp"

#include <Eigen/QR>

#include <stdexcept>

namespace kernoil {

QuarterlyShocks aggregate_shocks(const Eigen::MatrixXd& monthly_shocks, Month first_date) {
    const Eigen::Index t = monthly_shocks.rows();
    Eigen::Index first = 0;
    while (first < t && !first_date.plus(static_cast<int>(first)).starts_quarter()) ++first;
    if (first + 3 > t) {
        throw std::invalid_argument("aggregate_shocks: no complete calendar quarter");
    }
    const Eigen::Index n_q = (t - first) / 3;
    QuarterlyShocks out;
    out.start = first_date.plus(static_cast<int>(first));
    out.zeta.resize(n_q, monthly_shocks.cols());
    for (Eigen::Index q = 0; q < n_q; ++q) {
        out.zeta.row(q) = monthly_shocks.middleRows(first + 3 * q, 3).colwise().mean();
    }
    return out;
}

namespace {

struct RegressionData {
    Eigen::MatrixXd x;  // rows x (lags + 2): intercept, zeta_t..zeta_{t-lags}
    Eigen::VectorXd y;
    Month sample_start;
};

RegressionData assemble(const RawSeries& wage_growth, const QuarterlyShocks& zeta, int shock,
                        int lags) {
    if (wage_growth.freq != Freq::quarterly) {
        throw std::invalid_argument("estimate_wage_irf: wage growth series is not quarterly");
    }
    if (shock < 0 || shock >= zeta.zeta.cols()) {
        throw std::invalid_argument("estimate_wage_irf: shock index out of range");
    }
    // Regression sample: quarters where the wage observation and zeta lags
    // 0..lags all exist.
    const Month first_usable = zeta.quarter_at(lags);
    std::vector<Eigen::Index> rows_w;
    std::vector<Eigen::Index> rows_z;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(wage_growth.size()); ++i) {
        if (wage_growth.missing[static_cast<std::size_t>(i)]) continue;
        const Month q = wage_growth.date_at(static_cast<std::size_t>(i));
        if (q < first_usable) continue;
        const int zq = months_between(zeta.start, q) / 3;
        if (zq < lags || zq >= zeta.quarters()) continue;
        rows_w.push_back(i);
        rows_z.push_back(zq);
    }
    const Eigen::Index n_obs = static_cast<Eigen::Index>(rows_w.size());
    if (n_obs <= lags + 2) {
        throw std::invalid_argument("estimate_wage_irf: insufficient overlapping sample (" +
                                    std::to_string(n_obs) + " quarters)");
    }
    RegressionData d;
    d.x.resize(n_obs, lags + 2);
    d.y.resize(n_obs);
    d.sample_start = wage_growth.date_at(static_cast<std::size_t>(rows_w.front()));
    for (Eigen::Index r = 0; r < n_obs; ++r) {
        d.y[r] = wage_growth.values[static_cast<std::size_t>(rows_w[static_cast<std::size_t>(r)])];
        d.x(r, 0) = 1.0;
        for (int i = 0; i <= lags; ++i) {
            d.x(r, 1 + i) = zeta.zeta(rows_z[static_cast<std::size_t>(r)] - i, shock);
        }
    }
    return d;
}

WageRegression fit(const RegressionData& d) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
    if (qr.rank() < d.x.cols()) {
        throw std::runtime_error("estimate_wage_irf: regressor matrix is rank deficient");
    }
    const Eigen::VectorXd beta = qr.solve(d.y);
    WageRegression reg;
    reg.alpha = beta[0];
    reg.phi = beta.tail(d.x.cols() - 1);
    reg.residuals = d.y - d.x * beta;
    reg.cumulative.resize(reg.phi.size());
    double acc = 0.0;
    for (Eigen::Index h = 0; h < reg.phi.size(); ++h) {
        acc += reg.phi[h];
        reg.cumulative[h] = acc;
    }
    reg.sample_start = d.sample_start;
    return reg;
}

}  // namespace

WageRegression estimate_wage_irf(const RawSeries& real_wage_growth, const QuarterlyShocks& zeta,
                                 int shock, int lags) {
    return fit(assemble(real_wage_growth, zeta, shock, lags));
}

WageBands wage_bands(const RawSeries& real_wage_growth, const QuarterlyShocks& zeta, int shock,
                     int lags, int block_length, int replications, std::uint64_t seed) {
    if (replications < 2) throw std::invalid_argument("wage_bands: need at least 2 replications");
    const RegressionData d = assemble(real_wage_growth, zeta, shock, lags);
    const Eigen::Index n_obs = d.y.size();
    if (block_length < 1 || block_length > n_obs) {
        throw std::invalid_argument("wage_bands: block length out of range");
    }

    WageBands bands;
    bands.point = fit(d);

    const Eigen::Index n_starts = n_obs - block_length + 1;
    const Eigen::Index n_blocks = (n_obs + block_length - 1) / block_length;
    std::vector<Eigen::VectorXd> draws(static_cast<std::size_t>(replications));
    std::vector<char> ok(static_cast<std::size_t>(replications), 0);
    for (int r = 0; r < replications; ++r) {
        Rng rng = replication_stream(seed, static_cast<std::uint64_t>(r));
        RegressionData d_star;
        d_star.x.resize(n_obs, d.x.cols());
        d_star.y.resize(n_obs);
        Eigen::Index filled = 0;
        for (Eigen::Index b = 0; b < n_blocks; ++b) {
            const Eigen::Index start =
                static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(n_starts)));
            const Eigen::Index take = std::min<Eigen::Index>(block_length, n_obs - filled);
            d_star.x.middleRows(filled, take) = d.x.middleRows(start, take);
            d_star.y.segment(filled, take) = d.y.segment(start, take);
            filled += take;
        }
        try {
            draws[static_cast<std::size_t>(r)] = fit(d_star).cumulative;
            ok[static_cast<std::size_t>(r)] = 1;
        } catch (const std::exception&) {
            ok[static_cast<std::size_t>(r)] = 0;
        }
    }

    int used = 0;
    for (char flag : ok) used += flag;
    bands.replications_used = used;
    bands.replications_dropped = replications - used;
    if (bands.replications_dropped > 0.05 * replications) {
        throw std::runtime_error("wage_bands: " + std::to_string(bands.replications_dropped) +
                                 " of " + std::to_string(replications) + " replications failed");
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(lags + 1);
    for (int r = 0; r < replications; ++r) {
        if (ok[static_cast<std::size_t>(r)]) mean += draws[static_cast<std::size_t>(r)];
    }
    mean /= static_cast<double>(used);
    Eigen::VectorXd ssq = Eigen::VectorXd::Zero(lags + 1);
    for (int r = 0; r < replications; ++r) {
        if (!ok[static_cast<std::size_t>(r)]) continue;
        const Eigen::VectorXd dev = draws[static_cast<std::size_t>(r)] - mean;
        ssq += dev.cwiseProduct(dev);
    }
    bands.se_cumulative = (ssq / static_cast<double>(used - 1)).cwiseSqrt();
    return bands;
}

}  // namespace kernoil
