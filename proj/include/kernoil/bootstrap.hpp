#pragma once

#include "kernoil/dynamics.hpp"
#include "kernoil/rng.hpp"

namespace kernoil {

/// How resampled residuals are recentered before the recursion.
///   column_mean: shift each column so its mean matches the original
///                residual column mean (the default; a single full-length
///                block then reproduces the residuals exactly).
///   per_position: subtract the expectation of each within-block offset
///                 over all admissible block starts.
///   none: raw concatenated blocks.
enum class Centering { column_mean, per_position, none };

struct BootstrapConfig {
    int replications = 2000;
    int block_length = 24;
    std::uint64_t seed = 0;
    int horizon = 15;
    Centering centering = Centering::column_mean;
    Eigen::Index price_row = 2;
    double max_failure_share = 0.05;
    int threads = 0;  // 0 = hardware concurrency
};

/// Bootstrap standard errors around the point-estimate responses; bands are
/// point +- k * se for k = 1, 2.
struct BandSet {
    IrfSet point;
    std::vector<Eigen::MatrixXd> se;  // se[shock] : variables x (H+1)
    int replications_used = 0;
    int replications_dropped = 0;
};

/// Draw ceil(T/l) overlapping blocks of length l uniformly over the
/// T - l + 1 admissible starts, concatenate, truncate to T rows, recenter.
Eigen::MatrixXd block_resample(const Eigen::MatrixXd& residuals, int block_length, Rng& rng,
                               Centering centering = Centering::column_mean);

/// Rebuild a panel through the estimated recursion: the first p rows come
/// from `initial`, then y_t = alpha + sum A_i y_{t-i} + u_t.
Eigen::MatrixXd regenerate(const VarModel& model, const Eigen::MatrixXd& residuals,
                           const Eigen::MatrixXd& initial);

/// Recursive-design residual block bootstrap of the structural impulse
/// responses. Per replication: resample, regenerate, re-estimate,
/// re-identify with signs anchored to the original orientation. Replications
/// that fail to estimate are dropped and counted; more than
/// max_failure_share of them is an error. Deterministic given the seed,
/// independent of thread count.
BandSet irf_bands(const TimeSeriesFrame& panel, int p, const std::vector<bool>& cumulate,
                  const BootstrapConfig& config);

}  // namespace kernoil
