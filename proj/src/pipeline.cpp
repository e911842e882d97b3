#include "kernoil/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kernoil {

namespace {

std::string first_value_column(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string date_col, value_col;
        std::getline(ss, date_col, ',');
        if (!std::getline(ss, value_col, ',')) break;
        if (auto cr = value_col.find('\r'); cr != std::string::npos) value_col.erase(cr);
        return value_col;
    }
    throw std::runtime_error(path.filename().string() + ": no value column in header");
}

}  // namespace

RawSeries load_single_csv(const std::filesystem::path& path, Freq freq, bool allow_missing) {
    CsvSchema schema;
    schema.freq = freq;
    schema.columns.push_back({first_value_column(path), "", allow_missing});
    return load_csv(path, schema).front();
}

PipelineData ingest_inputs(const RunConfig& config) {
    PipelineData data;
    RawSeries production = load_single_csv(config.oil_production, Freq::monthly);
    RawSeries activity = load_single_csv(config.real_activity, Freq::monthly);
    RawSeries price_nominal = load_single_csv(config.oil_price_nominal, Freq::monthly);
    data.cpi = load_single_csv(config.cpi, Freq::monthly);
    data.employment_levels = load_single_csv(config.employment, Freq::monthly);
    data.wages_nominal = load_single_csv(config.wages_nominal, Freq::quarterly, true);

    RawSeries production_growth = log_difference(production);
    production_growth.name = panel_columns()[0];
    activity.name = panel_columns()[1];
    RawSeries real_price = log_level(deflate(price_nominal, data.cpi));
    real_price.name = panel_columns()[2];
    RawSeries employment_growth = log_difference(data.employment_levels);
    employment_growth.name = panel_columns()[3];

    data.panel = build_panel({production_growth, activity, real_price, employment_growth},
                             config.panel_window);
    return data;
}

}  // namespace kernoil
