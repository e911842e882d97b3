#pragma once

#include "kernoil/config.hpp"
#include "kernoil/ingest.hpp"

namespace kernoil {

/// Load a single-value-column CSV: the first non-date column is the series.
RawSeries load_single_csv(const std::filesystem::path& path, Freq freq, bool allow_missing = false);

/// Raw inputs plus the transformed estimation panel for a config.
struct PipelineData {
    TimeSeriesFrame panel;
    RawSeries employment_levels;  // monthly head counts, drives counterfactual levels
    RawSeries cpi;                // monthly index
    RawSeries wages_nominal;      // quarterly average weekly wage
};

/// ingest stage: load the raw series, apply the transformations
/// (log-difference production and employment, deflate and log the oil
/// price, pass real activity through), and align the panel on the window.
PipelineData ingest_inputs(const RunConfig& config);

}  // namespace kernoil
