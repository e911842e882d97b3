#pragma once

#include "kernoil/series.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace kernoil {

/// One value column of an input CSV. Columns not listed here are ignored.
struct CsvColumnSpec {
    std::string csv_name;
    std::string series_name;  // empty: reuse csv_name
    bool allow_missing = false;
};

struct CsvSchema {
    Freq freq = Freq::monthly;
    std::vector<CsvColumnSpec> columns;
};

/// Load the declared columns of a CSV whose first column is `date` (YYYY-MM,
/// quarterly files use the first month of each quarter). Dates must be
/// strictly increasing with no gaps; NA-style tokens are accepted only in
/// columns marked allow_missing. Errors name the offending row.
std::vector<RawSeries> load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// out[t] = ln(s[t]) - ln(s[t-1]); drops the first observation.
/// All values must be strictly positive and present.
RawSeries log_difference(const RawSeries& s);

/// Natural log of a strictly positive series, elementwise.
RawSeries log_level(const RawSeries& s);

/// real[t] = nominal[t] / cpi[t] on the date intersection of the two series.
RawSeries deflate(const RawSeries& nominal, const RawSeries& cpi);

/// Mean over each complete calendar quarter of a monthly series; incomplete
/// edge quarters are dropped, quarters containing a missing month stay
/// missing.
RawSeries quarterly_average(const RawSeries& monthly);

/// Canonical column order of the estimation panel:
/// oil production growth, real activity, log real oil price, employment growth.
const std::array<std::string, 4>& panel_columns();

/// Assemble the 4-variable estimation panel over `window` from transformed
/// series, matched by canonical name regardless of input order. The window
/// must be fully covered with no missing cells.
TimeSeriesFrame build_panel(const std::vector<RawSeries>& series, const DateRange& window);

}  // namespace kernoil
