#include "kernoil/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kernoil {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool is_missing_token(const std::string& s) {
    return s.empty() || s == "n/a" || s == "N/A" || s == "NA" || s == "na" || s == "NaN" ||
           s == "nan" || s == ".";
}

double parse_number(const std::string& cell, const std::string& file, std::size_t row,
                    const std::string& column) {
    const std::string t = trim(cell);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw std::runtime_error(file + ": row " + std::to_string(row) + ", column '" + column +
                                 "': non-numeric value '" + cell + "'");
    }
    return value;
}

}  // namespace

std::vector<RawSeries> load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    const std::string file = path.filename().string();

    std::string line;
    std::size_t row = 0;
    // Header: first column must be `date`, remaining columns are looked up by name.
    do {
        if (!std::getline(in, line)) throw std::runtime_error(file + ": empty file");
        ++row;
        line = trim(line);
    } while (line.empty() || line[0] == '#');

    const auto header = split_csv_line(line);
    if (header.empty() || trim(header[0]) != "date") {
        throw std::runtime_error(file + ": first column must be 'date'");
    }
    std::vector<std::size_t> col_index;
    for (const auto& spec : schema.columns) {
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return trim(h) == spec.csv_name; });
        if (it == header.end()) {
            throw std::runtime_error(file + ": declared column '" + spec.csv_name + "' not found");
        }
        col_index.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    std::vector<RawSeries> out(schema.columns.size());
    for (std::size_t k = 0; k < schema.columns.size(); ++k) {
        const auto& spec = schema.columns[k];
        out[k].name = spec.series_name.empty() ? spec.csv_name : spec.series_name;
        out[k].freq = schema.freq;
    }

    const int step = step_months(schema.freq);
    bool have_prev = false;
    Month prev{};
    while (std::getline(in, line)) {
        ++row;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        Month date;
        try {
            date = parse_month(trim(cells[0]));
        } catch (const std::exception& e) {
            throw std::runtime_error(file + ": row " + std::to_string(row) + ": " + e.what());
        }
        if (schema.freq == Freq::quarterly && !date.starts_quarter()) {
            throw std::runtime_error(file + ": row " + std::to_string(row) + ": quarterly date '" +
                                     format_month(date) + "' must be the first month of a quarter");
        }
        if (have_prev) {
            const int gap = months_between(prev, date);
            if (gap == 0) {
                throw std::runtime_error(file + ": row " + std::to_string(row) +
                                         ": duplicate date '" + format_month(date) + "'");
            }
            if (gap < 0) {
                throw std::runtime_error(file + ": row " + std::to_string(row) +
                                         ": dates out of order at '" + format_month(date) + "'");
            }
            if (gap != step) {
                throw std::runtime_error(file + ": row " + std::to_string(row) + ": date gap between '" +
                                         format_month(prev) + "' and '" + format_month(date) + "'");
            }
        }
        for (std::size_t k = 0; k < schema.columns.size(); ++k) {
            const auto& spec = schema.columns[k];
            if (col_index[k] >= cells.size()) {
                throw std::runtime_error(file + ": row " + std::to_string(row) +
                                         ": missing cell for column '" + spec.csv_name + "'");
            }
            const std::string cell = trim(cells[col_index[k]]);
            if (is_missing_token(cell)) {
                if (!spec.allow_missing) {
                    throw std::runtime_error(file + ": row " + std::to_string(row) + ", column '" +
                                             spec.csv_name + "': non-numeric value '" + cell + "'");
                }
                out[k].values.push_back(std::numeric_limits<double>::quiet_NaN());
                out[k].missing.push_back(true);
            } else {
                out[k].values.push_back(parse_number(cell, file, row, spec.csv_name));
                out[k].missing.push_back(false);
            }
        }
        if (!have_prev) {
            for (auto& s : out) s.start = date;
            have_prev = true;
        }
        prev = date;
    }
    if (!have_prev) throw std::runtime_error(file + ": no data rows");
    return out;
}

RawSeries log_difference(const RawSeries& s) {
    if (s.size() < 2) throw std::invalid_argument("log_difference: series '" + s.name + "' too short");
    RawSeries out;
    out.name = s.name;
    out.freq = s.freq;
    out.start = s.date_at(1);
    out.values.resize(s.size() - 1);
    out.missing.assign(s.size() - 1, false);
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s.missing[t] || !(s.values[t] > 0.0)) {
            throw std::domain_error("log_difference: nonpositive or missing value in '" + s.name +
                                    "' at " + format_date(s.date_at(t), s.freq));
        }
    }
    for (std::size_t t = 1; t < s.size(); ++t) {
        out.values[t - 1] = std::log(s.values[t]) - std::log(s.values[t - 1]);
    }
    return out;
}

RawSeries log_level(const RawSeries& s) {
    RawSeries out = s;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (s.missing[t]) continue;
        if (!(s.values[t] > 0.0)) {
            throw std::domain_error("log_level: nonpositive value in '" + s.name + "' at " +
                                    format_date(s.date_at(t), s.freq));
        }
        out.values[t] = std::log(s.values[t]);
    }
    return out;
}

RawSeries deflate(const RawSeries& nominal, const RawSeries& cpi) {
    if (nominal.freq != cpi.freq) {
        throw std::invalid_argument("deflate: '" + nominal.name + "' and '" + cpi.name +
                                    "' have different frequencies");
    }
    const Month first = std::max(nominal.start, cpi.start);
    const Month last = std::min(nominal.end(), cpi.end());
    if (first > last) {
        throw std::invalid_argument("deflate: '" + nominal.name + "' and '" + cpi.name +
                                    "' have no overlapping dates");
    }
    const int step = step_months(nominal.freq);
    RawSeries out;
    out.name = nominal.name;
    out.freq = nominal.freq;
    out.start = first;
    const int n = months_between(first, last) / step + 1;
    out.values.resize(n);
    out.missing.assign(n, false);
    for (int i = 0; i < n; ++i) {
        const Month m = first.plus(i, nominal.freq);
        const auto num = nominal.at(m);
        const auto den = cpi.at(m);
        if (den && *den == 0.0) {
            throw std::domain_error("deflate: zero value in '" + cpi.name + "' at " +
                                    format_date(m, cpi.freq));
        }
        if (!num || !den) {
            out.values[i] = std::numeric_limits<double>::quiet_NaN();
            out.missing[i] = true;
        } else {
            out.values[i] = *num / *den;
        }
    }
    return out;
}

RawSeries quarterly_average(const RawSeries& monthly) {
    if (monthly.freq != Freq::monthly) {
        throw std::invalid_argument("quarterly_average: series '" + monthly.name + "' is not monthly");
    }
    // First date that opens a calendar quarter.
    std::size_t first = 0;
    while (first < monthly.size() && !monthly.date_at(first).starts_quarter()) ++first;
    if (first + 3 > monthly.size()) {
        throw std::invalid_argument("quarterly_average: '" + monthly.name +
                                    "' contains no complete calendar quarter");
    }
    RawSeries out;
    out.name = monthly.name;
    out.freq = Freq::quarterly;
    out.start = monthly.date_at(first);
    for (std::size_t q = first; q + 3 <= monthly.size(); q += 3) {
        if (monthly.missing[q] || monthly.missing[q + 1] || monthly.missing[q + 2]) {
            out.values.push_back(std::numeric_limits<double>::quiet_NaN());
            out.missing.push_back(true);
        } else {
            out.values.push_back((monthly.values[q] + monthly.values[q + 1] + monthly.values[q + 2]) / 3.0);
            out.missing.push_back(false);
        }
    }
    return out;
}

const std::array<std::string, 4>& panel_columns() {
    static const std::array<std::string, 4> cols = {
        "oil-production-growth",
        "real-activity",
        "real-oil-price",
        "employment-growth",
    };
    return cols;
}

TimeSeriesFrame build_panel(const std::vector<RawSeries>& series, const DateRange& window) {
    if (window.first > window.last) throw std::invalid_argument("build_panel: empty window");

    TimeSeriesFrame frame;
    frame.start = window.first;
    frame.freq = Freq::monthly;
    frame.names.assign(panel_columns().begin(), panel_columns().end());
    const int rows = months_between(window.first, window.last) + 1;
    frame.values.resize(rows, 4);
    frame.mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(rows, 4, false);

    for (int c = 0; c < 4; ++c) {
        const std::string& want = frame.names[static_cast<std::size_t>(c)];
        const RawSeries* src = nullptr;
        for (const auto& s : series) {
            if (s.name != want) continue;
            if (src) throw std::invalid_argument("build_panel: duplicate series '" + want + "'");
            src = &s;
        }
        if (!src) throw std::invalid_argument("build_panel: missing series '" + want + "'");
        if (src->freq != Freq::monthly) {
            throw std::invalid_argument("build_panel: series '" + want + "' is not monthly");
        }
        std::vector<Month> gaps;
        for (int r = 0; r < rows; ++r) {
            const Month m = window.first.plus(r);
            if (auto v = src->at(m)) {
                frame.values(r, c) = *v;
            } else {
                gaps.push_back(m);
            }
        }
        if (!gaps.empty()) {
            std::string msg = "build_panel: series '" + want + "' does not cover";
            const std::size_t shown = std::min<std::size_t>(gaps.size(), 8);
            for (std::size_t i = 0; i < shown; ++i) msg += " " + format_month(gaps[i]);
            if (gaps.size() > shown) {
                msg += " (+" + std::to_string(gaps.size() - shown) + " more)";
            }
            throw std::invalid_argument(msg);
        }
    }
    frame.validate();
    return frame;
}

}  // namespace kernoil
