#pragma once

#include "kernoil/dates.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kernoil {

inline constexpr const char* kVersion = "0.1.0";

/// Run configuration parsed from a flat `key = value` file. Relative paths
/// resolve against the config file's directory; KERNOIL_OUTPUT_DIR overrides
/// the output directory.
struct RunConfig {
    std::filesystem::path oil_production;
    std::filesystem::path real_activity;
    std::filesystem::path oil_price_nominal;
    std::filesystem::path cpi;
    std::filesystem::path employment;
    std::filesystem::path wages_nominal;

    DateRange panel_window{Month{1990, 2}, Month{2024, 12}};
    int lags = 12;
    int horizon = 15;
    std::vector<int> fevd_horizons{1, 2, 3, 12, /*infinite*/ -1};

    int replications = 2000;
    int block_length = 24;
    std::uint64_t seed = 20240101;
    int threads = 0;
    std::string centering = "mean";  // mean | bjt | none

    Month histdecomp_from{1995, 1};
    DateRange counterfactual_early{Month{1997, 1}, Month{2009, 12}};
    DateRange counterfactual_late{Month{2010, 1}, Month{2024, 12}};

    int wage_lags = 8;
    int wage_block = 4;
    int wage_replications = 1000;

    std::filesystem::path output_dir = "out";

    std::uint64_t config_hash = 0;
};

RunConfig load_config(const std::filesystem::path& path);

/// "1,2,3,12,inf" -> {1, 2, 3, 12, kInfiniteHorizon}.
std::vector<int> parse_horizons(const std::string& text);

/// FNV-1a over the raw file bytes; stamped into every output's provenance
/// header so reruns are byte-comparable.
std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace kernoil
