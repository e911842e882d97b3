#pragma once

#include "kernoil/series.hpp"

#include <cstdint>

namespace kernoil {

/// Structural shocks averaged by calendar quarter; partial edge quarters
/// are dropped so every entry is the mean of exactly three monthly shocks.
struct QuarterlyShocks {
    Month start;              // first month of the first complete quarter
    Eigen::MatrixXd zeta;     // quarters x shocks

    Eigen::Index quarters() const { return zeta.rows(); }
    Month quarter_at(Eigen::Index q) const { return start.plus(static_cast<int>(q), Freq::quarterly); }
};

QuarterlyShocks aggregate_shocks(const Eigen::MatrixXd& monthly_shocks, Month first_date);

/// Distributed-lag regression of quarterly real wage growth on one shock's
/// quarterly averages at lags 0..lags; the cumulative coefficient sums are
/// the cumulated wage impulse responses.
struct WageRegression {
    double alpha = 0.0;
    Eigen::VectorXd phi;         // lags + 1 coefficients
    Eigen::VectorXd residuals;
    Eigen::VectorXd cumulative;  // running sums of phi
    Month sample_start;          // first regression quarter
};

WageRegression estimate_wage_irf(const RawSeries& real_wage_growth, const QuarterlyShocks& zeta,
                                 int shock, int lags = 8);

/// Moving-block bootstrap over whole regression rows (dependent plus all
/// lagged regressors jointly) so the lag structure survives resampling.
struct WageBands {
    WageRegression point;
    Eigen::VectorXd se_cumulative;
    int replications_used = 0;
    int replications_dropped = 0;
};

WageBands wage_bands(const RawSeries& real_wage_growth, const QuarterlyShocks& zeta, int shock,
                     int lags, int block_length, int replications, std::uint64_t seed);

}  // namespace kernoil
