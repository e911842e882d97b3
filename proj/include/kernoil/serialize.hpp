#pragma once

#include "kernoil/bootstrap.hpp"
#include "kernoil/dynamics.hpp"
#include "kernoil/network.hpp"
#include "kernoil/wage.hpp"

#include <cstdint>
#include <filesystem>
#include <variant>

namespace kernoil {

/// Stamped at the top of every output file. Contains no timestamps, so
/// identical runs produce identical bytes.
struct Provenance {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string version;
};

std::string provenance_header(const Provenance& prov);

/// Column-oriented result set shared by every emitter. Doubles render with
/// fixed 6 decimals in CSV and full precision in JSON.
using TableCell = std::variant<std::int64_t, double, std::string>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<TableCell>> rows;
};

enum class TableFormat { csv, json };

void emit_table(const ResultTable& table, TableFormat format, const std::filesystem::path& path,
                const Provenance& prov);
ResultTable read_table_json(const std::filesystem::path& path);

// Table builders for the pipeline's result types.
ResultTable irf_table(const IrfSet& irf, const std::vector<std::string>& shocks,
                      const std::vector<std::string>& variables);
ResultTable bands_table(const BandSet& bands, const std::vector<std::string>& shocks,
                        const std::vector<std::string>& variables);
ResultTable fevd_table(const FevdTable& table, const std::vector<std::string>& shocks,
                       const std::vector<std::string>& variables);
ResultTable histdecomp_table(const HistDecomp& hd, Eigen::Index variable, Month from);
ResultTable counterfactual_table(const std::vector<CounterfactualPath>& paths,
                                 const Eigen::VectorXd& actual_levels);
ResultTable network_table(const EmploymentResponse& resp);
ResultTable wage_table(const WageBands& bands, const std::string& shock);

/// Full-precision panel round trip (the `ingest` output feeds `estimate`).
void write_panel_csv(const TimeSeriesFrame& frame, const std::filesystem::path& path,
                     const Provenance& prov);
TimeSeriesFrame read_panel_csv(const std::filesystem::path& path);

void write_model_json(const VarModel& model, const std::filesystem::path& path,
                      const Provenance& prov);
VarModel read_model_json(const std::filesystem::path& path);

void write_structural_json(const StructuralModel& s, const SignConvention& sc,
                           const std::filesystem::path& path, const Provenance& prov);
struct StructuralFile {
    StructuralModel model;
    SignConvention signs;
};
StructuralFile read_structural_json(const std::filesystem::path& path);

IONetwork read_network_json(const std::filesystem::path& path);

}  // namespace kernoil
