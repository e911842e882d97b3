#pragma once

#include "kernoil/dates.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace kernoil {

/// A single named series on a contiguous monthly or quarterly calendar.
/// Missing observations stay in place and are flagged; the date axis never
/// has gaps, so position i always means start + i steps.
struct RawSeries {
    std::string name;
    Freq freq = Freq::monthly;
    Month start;
    std::vector<double> values;
    std::vector<bool> missing;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }

    Month date_at(std::size_t i) const { return start.plus(static_cast<int>(i), freq); }
    Month end() const;

    /// Value at a date; nullopt outside the range or when flagged missing.
    std::optional<double> at(const Month& m) const;

    void validate() const;
};

/// Date-aligned multi-column panel, the estimation input.
struct TimeSeriesFrame {
    Month start;
    Freq freq = Freq::monthly;
    std::vector<std::string> names;
    Eigen::MatrixXd values;  // rows = time, cols = series
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // true = missing

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    Month date_at(Eigen::Index i) const { return start.plus(static_cast<int>(i), freq); }

    Eigen::Index column(const std::string& name) const;
    bool any_missing() const { return mask.any(); }
    void validate() const;
};

}  // namespace kernoil
