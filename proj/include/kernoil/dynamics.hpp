#pragma once

#include "kernoil/structural.hpp"

#include <optional>

namespace kernoil {

/// Structural moving-average coefficients Theta_0..Theta_H.
struct MaSequence {
    std::vector<Eigen::MatrixXd> theta;

    int horizon() const { return static_cast<int>(theta.size()) - 1; }
    int n() const { return theta.empty() ? 0 : static_cast<int>(theta.front().rows()); }
};

/// Phi_0 = I, Phi_h = sum_{i<=min(h,p)} A_i Phi_{h-i}; Theta_h = Phi_h b0inv.
MaSequence ma_coefficients(const VarModel& model, const Eigen::MatrixXd& b0inv, int horizon);

/// Impulse responses per shock; responses[j] is variables x (H+1).
/// Variables flagged cumulative carry running sums of the level responses.
struct IrfSet {
    std::vector<Eigen::MatrixXd> responses;
    std::vector<bool> cumulative;
    Eigen::VectorXd signs;

    int horizon() const { return responses.empty() ? -1 : static_cast<int>(responses.front().cols()) - 1; }
};

IrfSet impulse_responses(const MaSequence& ma, const std::vector<bool>& cumulate,
                         const Eigen::VectorXd& signs);

/// Sentinel for the infinite forecast horizon (the variance decomposition).
constexpr int kInfiniteHorizon = -1;

/// Forecast error variance shares in percent; shares[variable] is
/// shocks x horizons and each column sums to 100.
struct FevdTable {
    std::vector<int> horizons;
    std::vector<Eigen::MatrixXd> shares;
};

/// Finite horizons truncate the MA sum at h terms; the infinite horizon
/// solves the companion-form Lyapunov equation rather than truncating.
FevdTable fevd(const VarModel& model, const Eigen::MatrixXd& b0inv, const std::vector<int>& horizons);

/// Additive attribution of each effective-sample observation to cumulated
/// past structural shocks. contributions[j] is T_eff x variables; base
/// absorbs the intercept and pre-sample initial conditions so that
/// sum_j contributions + base = observed holds as an identity. The
/// contributions alone reproduce the truncated moving-average
/// approximation of the observed series.
struct HistDecomp {
    Month start;
    Freq freq = Freq::monthly;
    std::vector<std::string> labels;
    std::vector<Eigen::MatrixXd> contributions;
    Eigen::MatrixXd base;
    Eigen::MatrixXd observed;

    Eigen::Index t_eff() const { return base.rows(); }
    Month date_at(Eigen::Index t) const { return start.plus(static_cast<int>(t), freq); }
};

/// `panel` must be the estimation panel the model was fit on. With demean
/// set, the effective-sample mean is removed from the observed series before
/// the base term is formed.
HistDecomp historical_decomposition(const VarModel& model, const StructuralModel& structural,
                                    const TimeSeriesFrame& panel, bool demean = false);

enum class Compounding { log_growth, simple };

struct CounterfactualSpec {
    std::string remove;         // shock label, or empty for none
    DateRange window;           // window.first carries base_level
    double base_level = 0.0;
    double mean_growth = 0.0;   // only used under paper_convention
    Eigen::Index variable = 3;  // employment growth in the canonical ordering
    bool paper_convention = false;
    Compounding compounding = Compounding::log_growth;
};

/// Level path for the window with one shock's contribution removed from
/// observed growth. With remove empty the path reproduces the observed
/// levels. paper_convention instead rebuilds growth from the remaining
/// shock contributions plus the window-average growth.
struct CounterfactualPath {
    Month start;
    Freq freq = Freq::monthly;
    std::string shock_removed;
    Eigen::VectorXd levels;  // window length; levels[0] = base_level
    Eigen::VectorXd growth;  // growth[0] = 0 by convention
};

CounterfactualPath counterfactual_levels(const HistDecomp& hd, const CounterfactualSpec& spec);

}  // namespace kernoil
