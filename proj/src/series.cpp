#include "kernoil/series.hpp"

#include <stdexcept>

namespace kernoil {

Month RawSeries::end() const {
    if (empty()) throw std::logic_error("end() on empty series '" + name + "'");
    return date_at(size() - 1);
}

std::optional<double> RawSeries::at(const Month& m) const {
    int offset = months_between(start, m);
    int step = step_months(freq);
    if (offset < 0 || offset % step != 0) return std::nullopt;
    std::size_t i = static_cast<std::size_t>(offset / step);
    if (i >= size() || missing[i]) return std::nullopt;
    return values[i];
}

void RawSeries::validate() const {
    if (values.size() != missing.size()) {
        throw std::logic_error("series '" + name + "': value/missing length mismatch");
    }
}

Eigen::Index TimeSeriesFrame::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<Eigen::Index>(i);
    }
    throw std::invalid_argument("frame has no column '" + name + "'");
}

void TimeSeriesFrame::validate() const {
    if (static_cast<Eigen::Index>(names.size()) != values.cols()) {
        throw std::logic_error("frame: name count does not match column count");
    }
    if (mask.rows() != values.rows() || mask.cols() != values.cols()) {
        throw std::logic_error("frame: mask shape does not match values");
    }
}

}  // namespace kernoil
