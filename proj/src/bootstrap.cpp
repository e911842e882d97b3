#include "kernoil/bootstrap.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace kernoil {

namespace {

/// Signs that orient a replication's impact columns with the original
/// (already sign-normalized) estimate, preventing label switching from
/// inflating the spread across replications. Rows are standardized by the
/// original innovation scales first; otherwise the variable with the
/// largest units decides the correlation on its own.
Eigen::VectorXd anchor_signs(const Eigen::MatrixXd& b0inv_rep, const Eigen::MatrixXd& b0inv_ref,
                             const Eigen::VectorXd& signs_ref, const Eigen::VectorXd& row_scale) {
    Eigen::VectorXd s = Eigen::VectorXd::Ones(b0inv_rep.cols());
    for (Eigen::Index j = 0; j < b0inv_rep.cols(); ++j) {
        double align = 0.0;
        for (Eigen::Index i = 0; i < b0inv_rep.rows(); ++i) {
            align += (b0inv_rep(i, j) / row_scale[i]) *
                     (signs_ref[j] * b0inv_ref(i, j) / row_scale[i]);
        }
        if (align < 0.0) s[j] = -1.0;
    }
    return s;
}

}  // namespace

Eigen::MatrixXd block_resample(const Eigen::MatrixXd& residuals, int block_length, Rng& rng,
                               Centering centering) {
    const Eigen::Index t = residuals.rows();
    if (block_length < 1) throw std::invalid_argument("block_resample: block length must be >= 1");
    if (block_length > t) {
        throw std::invalid_argument("block_resample: block length " + std::to_string(block_length) +
                                    " exceeds sample size " + std::to_string(t));
    }
    const Eigen::Index n_starts = t - block_length + 1;
    const Eigen::Index n_blocks = (t + block_length - 1) / block_length;

    Eigen::MatrixXd out(t, residuals.cols());
    Eigen::Index filled = 0;
    for (Eigen::Index b = 0; b < n_blocks; ++b) {
        const Eigen::Index start =
            static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(n_starts)));
        const Eigen::Index take = std::min<Eigen::Index>(block_length, t - filled);
        out.middleRows(filled, take) = residuals.middleRows(start, take);
        filled += take;
    }

    switch (centering) {
        case Centering::none:
            break;
        case Centering::column_mean: {
            const Eigen::RowVectorXd shift =
                residuals.colwise().mean() - out.colwise().mean();
            out.rowwise() += shift;
            break;
        }
        case Centering::per_position: {
            // Expected draw at within-block offset s is the mean of
            // residual rows s..s+n_starts-1; subtract it, then restore the
            // original column means.
            Eigen::MatrixXd offset_mean(block_length, residuals.cols());
            for (int s = 0; s < block_length; ++s) {
                offset_mean.row(s) = residuals.middleRows(s, n_starts).colwise().mean();
            }
            for (Eigen::Index r = 0; r < t; ++r) {
                out.row(r) -= offset_mean.row(r % block_length);
            }
            out.rowwise() += residuals.colwise().mean();
            break;
        }
    }
    return out;
}

Eigen::MatrixXd regenerate(const VarModel& model, const Eigen::MatrixXd& residuals,
                           const Eigen::MatrixXd& initial) {
    const int n = model.n();
    const int p = model.p;
    if (initial.rows() != p || initial.cols() != n) {
        throw std::invalid_argument("regenerate: initial block must be p rows of the panel");
    }
    const Eigen::Index t_eff = residuals.rows();
    Eigen::MatrixXd y(p + t_eff, n);
    y.topRows(p) = initial;
    for (Eigen::Index t = 0; t < t_eff; ++t) {
        Eigen::VectorXd v = model.intercept;
        for (int lag = 1; lag <= p; ++lag) {
            v += model.coeffs[static_cast<std::size_t>(lag - 1)] * y.row(p + t - lag).transpose();
        }
        y.row(p + t) = v.transpose() + residuals.row(t);
    }
    return y;
}

BandSet irf_bands(const TimeSeriesFrame& panel, int p, const std::vector<bool>& cumulate,
                  const BootstrapConfig& config) {
    if (config.replications < 2) throw std::invalid_argument("irf_bands: need at least 2 replications");
    const VarModel model = estimate_ols(panel, p);
    const StructuralModel structural = identify(model);
    const SignConvention sc = normalize_signs(structural.b0inv, config.price_row);
    const MaSequence ma = ma_coefficients(model, structural.b0inv, config.horizon);

    BandSet bands;
    bands.point = impulse_responses(ma, cumulate, sc.signs);

    const int n = model.n();
    const Eigen::MatrixXd initial = panel.values.topRows(p);
    const Eigen::VectorXd row_scale = model.sigma_u.diagonal().cwiseSqrt();
    const int reps = config.replications;

    // responses[r][shock], kept per replication index so reductions run in a
    // fixed order whatever the thread count.
    std::vector<std::vector<Eigen::MatrixXd>> responses(
        static_cast<std::size_t>(reps));
    std::vector<char> ok(static_cast<std::size_t>(reps), 0);

    auto run_replication = [&](int r) {
        Rng rng = replication_stream(config.seed, static_cast<std::uint64_t>(r));
        try {
            const Eigen::MatrixXd u_star =
                block_resample(model.residuals, config.block_length, rng, config.centering);
            const Eigen::MatrixXd y_star = regenerate(model, u_star, initial);
            const VarModel m_star = estimate_ols(y_star, p);
            const CholeskyFactors f_star = cholesky_identify(m_star.sigma_u);
            const Eigen::VectorXd s_star =
                anchor_signs(f_star.b0inv, structural.b0inv, sc.signs, row_scale);
            const MaSequence ma_star = ma_coefficients(m_star, f_star.b0inv, config.horizon);
            const IrfSet irf_star = impulse_responses(ma_star, cumulate, s_star);
            responses[static_cast<std::size_t>(r)] = irf_star.responses;
            ok[static_cast<std::size_t>(r)] = 1;
        } catch (const std::exception&) {
            ok[static_cast<std::size_t>(r)] = 0;
        }
    };

    int n_threads = config.threads > 0
                        ? config.threads
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n_threads = std::min(n_threads, reps);
    if (n_threads <= 1) {
        for (int r = 0; r < reps; ++r) run_replication(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) run_replication(r);
            });
        }
        for (auto& th : pool) th.join();
    }

    int used = 0;
    for (char flag : ok) used += flag;
    bands.replications_used = used;
    bands.replications_dropped = reps - used;
    if (bands.replications_dropped > config.max_failure_share * reps) {
        throw std::runtime_error("irf_bands: " + std::to_string(bands.replications_dropped) + " of " +
                                 std::to_string(reps) + " replications failed to estimate");
    }
    if (used < 2) throw std::runtime_error("irf_bands: too few successful replications");

    bands.se.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, config.horizon + 1));
    for (int j = 0; j < n; ++j) {
        Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, config.horizon + 1);
        for (int r = 0; r < reps; ++r) {
            if (ok[static_cast<std::size_t>(r)]) {
                mean += responses[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
            }
        }
        mean /= static_cast<double>(used);
        Eigen::MatrixXd ssq = Eigen::MatrixXd::Zero(n, config.horizon + 1);
        for (int r = 0; r < reps; ++r) {
            if (!ok[static_cast<std::size_t>(r)]) continue;
            const Eigen::MatrixXd dev =
                responses[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] - mean;
            ssq += dev.cwiseProduct(dev);
        }
        bands.se[static_cast<std::size_t>(j)] = (ssq / static_cast<double>(used - 1)).cwiseSqrt();
    }
    return bands;
}

}  // namespace kernoil
