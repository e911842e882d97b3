// kernoil: structural analysis of the global crude-oil market and Kern
// County employment. Subcommands mirror the pipeline stages; `replicate`
// runs the whole chain on one config.

#include "kernoil/bootstrap.hpp"
#include "kernoil/pipeline.hpp"
#include "kernoil/serialize.hpp"
#include "kernoil/wage.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numeric>

using namespace kernoil;

namespace {

struct FittedPipeline {
    PipelineData data;
    VarModel model;
    StructuralModel structural;
    SignConvention signs;
};

FittedPipeline fit(const RunConfig& config) {
    FittedPipeline f;
    f.data = ingest_inputs(config);
    f.model = estimate_ols(f.data.panel, config.lags);
    f.structural = identify(f.model);
    f.signs = normalize_signs(f.structural.b0inv, 2);
    for (int j : f.signs.zero_ties) {
        std::cerr << "note: shock '" << f.structural.labels[static_cast<std::size_t>(j)]
                  << "' has zero price impact; sign tie broken to +1\n";
    }
    return f;
}

std::vector<bool> panel_cumulate_flags() {
    // Growth-rate variables (production, employment) report cumulated
    // responses; the two level variables do not.
    return {true, false, false, true};
}

Provenance provenance_for(const RunConfig& config) {
    return Provenance{config.config_hash, config.seed, kVersion};
}

void emit_both(const ResultTable& table, const std::filesystem::path& csv_path,
               const Provenance& prov) {
    emit_table(table, TableFormat::csv, csv_path, prov);
    std::filesystem::path json_path = csv_path;
    json_path.replace_extension(".json");
    emit_table(table, TableFormat::json, json_path, prov);
}

Centering centering_mode(const RunConfig& config) {
    if (config.centering == "bjt") return Centering::per_position;
    if (config.centering == "none") return Centering::none;
    return Centering::column_mean;
}

Eigen::VectorXd window_levels(const RawSeries& levels, const DateRange& window) {
    const int len = months_between(window.first, window.last) + 1;
    Eigen::VectorXd out(len);
    for (int t = 0; t < len; ++t) {
        const auto v = levels.at(window.first.plus(t));
        if (!v) {
            throw std::runtime_error("employment level missing at " +
                                     format_month(window.first.plus(t)));
        }
        out[t] = *v;
    }
    return out;
}

double window_mean_growth(const HistDecomp& hd, const DateRange& window, Eigen::Index variable) {
    const Eigen::Index first = months_between(hd.start, window.first);
    const Eigen::Index len = months_between(window.first, window.last) + 1;
    double acc = 0.0;
    for (Eigen::Index t = 1; t < len; ++t) acc += hd.observed(first + t, variable);
    return acc / static_cast<double>(len - 1);
}

std::vector<CounterfactualPath> counterfactual_window(const FittedPipeline& f, const HistDecomp& hd,
                                                      const DateRange& window,
                                                      const std::vector<std::string>& removes,
                                                      bool paper_convention) {
    CounterfactualSpec spec;
    spec.window = window;
    spec.base_level = window_levels(f.data.employment_levels, {window.first, window.first})[0];
    spec.mean_growth = window_mean_growth(hd, window, 3);
    spec.paper_convention = paper_convention;
    std::vector<CounterfactualPath> paths;
    for (const auto& remove : removes) {
        spec.remove = remove == "none" ? "" : remove;
        paths.push_back(counterfactual_levels(hd, spec));
    }
    return paths;
}

void cmd_ingest(const RunConfig& config) {
    const PipelineData data = ingest_inputs(config);
    write_panel_csv(data.panel, config.output_dir / "panel.csv", provenance_for(config));
    std::cout << "panel: " << data.panel.rows() << " rows ("
              << format_month(data.panel.start) << ".."
              << format_month(data.panel.date_at(data.panel.rows() - 1)) << ") -> "
              << (config.output_dir / "panel.csv").string() << "\n";
}

void cmd_estimate(const std::string& panel_path, int lags, const std::string& out_path) {
    const TimeSeriesFrame panel = read_panel_csv(panel_path);
    const VarModel model = estimate_ols(panel, lags);
    write_model_json(model, out_path, Provenance{hash_file(panel_path), 0, kVersion});
    const CompanionForm cf = companion(model);
    std::cout << "estimated VAR(" << lags << ") on " << model.t_eff()
              << " effective observations; max companion modulus " << cf.max_modulus() << " -> "
              << out_path << "\n";
}

void cmd_identify(const std::string& model_path, const std::string& out_path) {
    const VarModel model = read_model_json(model_path);
    const StructuralModel s = identify(model);
    const SignConvention sc = normalize_signs(s.b0inv, 2);
    write_structural_json(s, sc, out_path, Provenance{hash_file(model_path), 0, kVersion});
    std::cout << "identified " << s.labels.size() << " shocks -> " << out_path << "\n";
}

void cmd_irf(const RunConfig& config, int horizon) {
    const FittedPipeline f = fit(config);
    const MaSequence ma = ma_coefficients(f.model, f.structural.b0inv, horizon);
    const IrfSet irf = impulse_responses(ma, panel_cumulate_flags(), f.signs.signs);
    emit_both(irf_table(irf, f.structural.labels, f.model.names), config.output_dir / "irf.csv",
              provenance_for(config));
    std::cout << "impulse responses (horizon " << horizon << ") -> "
              << (config.output_dir / "irf.csv").string() << "\n";
}

void cmd_fevd(const RunConfig& config, const std::vector<int>& horizons) {
    const FittedPipeline f = fit(config);
    const FevdTable table = fevd(f.model, f.structural.b0inv, horizons);
    emit_both(fevd_table(table, f.structural.labels, f.model.names),
              config.output_dir / "fevd.csv", provenance_for(config));
    std::cout << "fevd (" << horizons.size() << " horizons) -> "
              << (config.output_dir / "fevd.csv").string() << "\n";
}

void cmd_histdecomp(const RunConfig& config, Month from, const std::string& variable,
                    bool demean) {
    const FittedPipeline f = fit(config);
    const HistDecomp hd = historical_decomposition(f.model, f.structural, f.data.panel, demean);
    const Eigen::Index var = f.data.panel.column(variable);
    emit_both(histdecomp_table(hd, var, from), config.output_dir / "histdecomp.csv",
              provenance_for(config));
    std::cout << "historical decomposition of " << variable << " from " << format_month(from)
              << " -> " << (config.output_dir / "histdecomp.csv").string() << "\n";
}

void cmd_counterfactual(const RunConfig& config, const std::string& remove, Month from, Month to,
                        bool paper_convention) {
    const FittedPipeline f = fit(config);
    const HistDecomp hd = historical_decomposition(f.model, f.structural, f.data.panel);
    const DateRange window{from, to};
    const auto paths = counterfactual_window(f, hd, window, {remove}, paper_convention);
    const Eigen::VectorXd actual = window_levels(f.data.employment_levels, window);
    emit_both(counterfactual_table(paths, actual), config.output_dir / "counterfactual.csv",
              provenance_for(config));
    std::cout << "counterfactual (remove " << remove << ", " << format_month(from) << ".."
              << format_month(to) << ") -> "
              << (config.output_dir / "counterfactual.csv").string() << "\n";
}

void cmd_bands(const RunConfig& config, int horizon) {
    const FittedPipeline f = fit(config);
    BootstrapConfig bc;
    bc.replications = config.replications;
    bc.block_length = config.block_length;
    bc.seed = config.seed;
    bc.horizon = horizon;
    bc.threads = config.threads;
    bc.centering = centering_mode(config);
    const BandSet bands = irf_bands(f.data.panel, config.lags, panel_cumulate_flags(), bc);
    emit_both(bands_table(bands, f.structural.labels, f.model.names),
              config.output_dir / "irf_bands.csv", provenance_for(config));
    std::cout << "bootstrap bands: " << bands.replications_used << " replications used, "
              << bands.replications_dropped << " dropped -> "
              << (config.output_dir / "irf_bands.csv").string() << "\n";
}

void cmd_wages(const RunConfig& config, const std::string& shock_label) {
    const FittedPipeline f = fit(config);
    const auto& labels = f.structural.labels;
    const auto it = std::find(labels.begin(), labels.end(), shock_label);
    if (it == labels.end()) throw std::runtime_error("unknown shock label '" + shock_label + "'");
    const int shock = static_cast<int>(it - labels.begin());

    // Orient the shock series before averaging so a positive zeta means a
    // price-raising innovation, matching the reported impulse responses.
    Eigen::MatrixXd oriented = f.structural.shocks;
    for (Eigen::Index j = 0; j < oriented.cols(); ++j) oriented.col(j) *= f.signs.signs[j];
    const QuarterlyShocks zeta = aggregate_shocks(oriented, f.structural.sample_start);

    const RawSeries cpi_q = quarterly_average(f.data.cpi);
    RawSeries real_wage_growth = log_difference(deflate(f.data.wages_nominal, cpi_q));
    real_wage_growth.name = "real-wage-growth";

    const WageBands bands = wage_bands(real_wage_growth, zeta, shock, config.wage_lags,
                                       config.wage_block, config.wage_replications, config.seed);
    const auto path = config.output_dir / ("wages_" + shock_label + ".csv");
    emit_both(wage_table(bands, shock_label), path, provenance_for(config));
    std::cout << "wage regression on " << shock_label << ": " << bands.replications_used
              << " replications -> " << path.string() << "\n";
}

void cmd_network(const std::string& spec_path, double d_omega, const std::string& dz_text,
                 const std::string& out_path) {
    const IONetwork net = read_network_json(spec_path);
    OilShock shock;
    shock.d_omega = d_omega;
    shock.dz_tilde = Eigen::VectorXd::Zero(net.n());
    if (!dz_text.empty()) {
        std::stringstream ss(dz_text);
        std::string item;
        Eigen::Index i = 0;
        while (std::getline(ss, item, ',')) {
            if (i >= net.n()) throw std::runtime_error("--dz has more entries than sectors");
            shock.dz_tilde[i++] = std::stod(item);
        }
        if (i != net.n()) throw std::runtime_error("--dz must list one value per sector");
    }
    const EmploymentResponse resp = employment_response(net, shock);
    emit_table(network_table(resp), TableFormat::csv, out_path,
               Provenance{hash_file(spec_path), 0, kVersion});
    std::cout << "network response (" << net.n() << " sectors) -> " << out_path << "\n";
}

void cmd_replicate(const RunConfig& config) {
    const Provenance prov = provenance_for(config);
    const FittedPipeline f = fit(config);
    write_panel_csv(f.data.panel, config.output_dir / "panel.csv", prov);
    write_model_json(f.model, config.output_dir / "model.json", prov);
    write_structural_json(f.structural, f.signs, config.output_dir / "structural.json", prov);

    const MaSequence ma = ma_coefficients(f.model, f.structural.b0inv, config.horizon);
    const IrfSet irf = impulse_responses(ma, panel_cumulate_flags(), f.signs.signs);
    emit_both(irf_table(irf, f.structural.labels, f.model.names), config.output_dir / "irf.csv",
              prov);

    const FevdTable table = fevd(f.model, f.structural.b0inv, config.fevd_horizons);
    emit_both(fevd_table(table, f.structural.labels, f.model.names),
              config.output_dir / "fevd.csv", prov);

    const HistDecomp hd = historical_decomposition(f.model, f.structural, f.data.panel);
    emit_both(histdecomp_table(hd, 3, config.histdecomp_from),
              config.output_dir / "histdecomp.csv", prov);

    BootstrapConfig bc;
    bc.replications = config.replications;
    bc.block_length = config.block_length;
    bc.seed = config.seed;
    bc.horizon = config.horizon;
    bc.threads = config.threads;
    bc.centering = centering_mode(config);
    const BandSet bands = irf_bands(f.data.panel, config.lags, panel_cumulate_flags(), bc);
    emit_both(bands_table(bands, f.structural.labels, f.model.names),
              config.output_dir / "irf_bands.csv", prov);

    std::vector<std::string> removes = f.structural.labels;
    const auto early =
        counterfactual_window(f, hd, config.counterfactual_early, removes, false);
    emit_both(counterfactual_table(early, window_levels(f.data.employment_levels,
                                                        config.counterfactual_early)),
              config.output_dir / "counterfactual_early.csv", prov);
    const auto late = counterfactual_window(f, hd, config.counterfactual_late, removes, false);
    emit_both(counterfactual_table(late, window_levels(f.data.employment_levels,
                                                       config.counterfactual_late)),
              config.output_dir / "counterfactual_late.csv", prov);

    std::cout << "replicate: wrote panel.csv model.json structural.json and the irf/fevd/"
                 "histdecomp/irf_bands/counterfactual tables (CSV + JSON) under "
              << config.output_dir.string() << " (" << bands.replications_used
              << " bootstrap replications)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural VAR analysis of the oil market and Kern County employment"};
    app.require_subcommand(1);

    std::string config_path = "fixtures/kern.toml";
    std::string panel_path, model_path, out_path, spec_path;
    std::string remove = "oil-specific-demand";
    std::string shock_label = "oil-specific-demand";
    std::string variable = "employment-growth";
    std::string from_text, to_text, dz_text, horizons_text;
    int lags = 12;
    int horizon = -1;
    bool paper_convention = false;
    bool demean = false;
    double d_omega = 0.0;

    auto* ingest_cmd = app.add_subcommand("ingest", "build the aligned estimation panel");
    ingest_cmd->add_option("--config", config_path, "run configuration file");

    auto* estimate_cmd = app.add_subcommand("estimate", "least-squares VAR fit on a panel CSV");
    estimate_cmd->add_option("--panel", panel_path, "panel CSV path")->required();
    estimate_cmd->add_option("--lags", lags, "lag order");
    estimate_cmd->add_option("--out", out_path, "model JSON output")->required();

    auto* identify_cmd = app.add_subcommand("identify", "recursive identification of a model");
    identify_cmd->add_option("--model", model_path, "model JSON path")->required();
    identify_cmd->add_option("--out", out_path, "structural JSON output")->required();

    auto* irf_cmd = app.add_subcommand("irf", "structural impulse responses");
    irf_cmd->add_option("--config", config_path, "run configuration file");
    irf_cmd->add_option("--horizon", horizon, "response horizon in months");

    auto* fevd_cmd = app.add_subcommand("fevd", "forecast error variance decomposition");
    fevd_cmd->add_option("--config", config_path, "run configuration file");
    fevd_cmd->add_option("--horizons", horizons_text, "comma list, e.g. 1,2,3,12,inf");

    auto* hd_cmd = app.add_subcommand("histdecomp", "historical decomposition");
    hd_cmd->add_option("--config", config_path, "run configuration file");
    hd_cmd->add_option("--from", from_text, "first month reported (YYYY-MM)");
    hd_cmd->add_option("--variable", variable, "panel variable to decompose");
    hd_cmd->add_flag("--demean", demean, "remove the effective-sample mean first");

    auto* cf_cmd = app.add_subcommand("counterfactual", "employment level path without one shock");
    cf_cmd->add_option("--config", config_path, "run configuration file");
    cf_cmd->add_option("--remove", remove, "shock label or 'none'");
    cf_cmd->add_option("--from", from_text, "window start (YYYY-MM)");
    cf_cmd->add_option("--to", to_text, "window end (YYYY-MM)");
    cf_cmd->add_flag("--paper-convention", paper_convention,
                     "rebuild growth from kept contributions plus mean growth");

    auto* bands_cmd = app.add_subcommand("bands", "bootstrap standard-error bands for the IRFs");
    bands_cmd->add_option("--config", config_path, "run configuration file");
    int reps_override = -1, block_override = -1, threads_override = -1;
    std::int64_t seed_override = -1;
    bands_cmd->add_option("--reps", reps_override, "bootstrap replications");
    bands_cmd->add_option("--block", block_override, "block length in months");
    bands_cmd->add_option("--seed", seed_override, "bootstrap seed");
    bands_cmd->add_option("--horizon", horizon, "response horizon in months");
    bands_cmd->add_option("--threads", threads_override, "worker threads (0 = hardware)");

    auto* wages_cmd = app.add_subcommand("wages", "second-stage real wage regressions");
    wages_cmd->add_option("--config", config_path, "run configuration file");
    wages_cmd->add_option("--shock", shock_label, "shock label");
    int wage_lags_override = -1, wage_block_override = -1, wage_reps_override = -1;
    wages_cmd->add_option("--lags", wage_lags_override, "distributed-lag length");
    wages_cmd->add_option("--block", wage_block_override, "block length in quarters");
    wages_cmd->add_option("--reps", wage_reps_override, "bootstrap replications");

    auto* network_cmd = app.add_subcommand("network", "multisector employment decomposition");
    network_cmd->add_option("--spec", spec_path, "network JSON spec")->required();
    network_cmd->add_option("--domega", d_omega, "change in household oil income");
    network_cmd->add_option("--dz", dz_text, "comma list of nominal demand changes");
    std::string network_out = "network.csv";
    network_cmd->add_option("--out", network_out, "output CSV")->capture_default_str();

    auto* replicate_cmd = app.add_subcommand("replicate", "run the full pipeline on a config");
    replicate_cmd->add_option("--config", config_path, "run configuration file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << app.help() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (estimate_cmd->parsed()) {
            cmd_estimate(panel_path, lags, out_path);
            return 0;
        }
        if (identify_cmd->parsed()) {
            cmd_identify(model_path, out_path);
            return 0;
        }
        if (network_cmd->parsed()) {
            cmd_network(spec_path, d_omega, dz_text, network_out);
            return 0;
        }

        RunConfig config = load_config(config_path);
        if (ingest_cmd->parsed()) {
            cmd_ingest(config);
        } else if (irf_cmd->parsed()) {
            cmd_irf(config, horizon > 0 ? horizon : config.horizon);
        } else if (fevd_cmd->parsed()) {
            cmd_fevd(config, horizons_text.empty() ? config.fevd_horizons
                                                   : parse_horizons(horizons_text));
        } else if (hd_cmd->parsed()) {
            cmd_histdecomp(config,
                           from_text.empty() ? config.histdecomp_from : parse_month(from_text),
                           variable, demean);
        } else if (cf_cmd->parsed()) {
            cmd_counterfactual(config, remove,
                               from_text.empty() ? config.counterfactual_late.first
                                                 : parse_month(from_text),
                               to_text.empty() ? config.counterfactual_late.last
                                               : parse_month(to_text),
                               paper_convention);
        } else if (bands_cmd->parsed()) {
            if (reps_override > 0) config.replications = reps_override;
            if (block_override > 0) config.block_length = block_override;
            if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
            if (threads_override >= 0) config.threads = threads_override;
            cmd_bands(config, horizon > 0 ? horizon : config.horizon);
        } else if (wages_cmd->parsed()) {
            if (wage_lags_override > 0) config.wage_lags = wage_lags_override;
            if (wage_block_override > 0) config.wage_block = wage_block_override;
            if (wage_reps_override > 0) config.wage_replications = wage_reps_override;
            cmd_wages(config, shock_label);
        } else if (replicate_cmd->parsed()) {
            cmd_replicate(config);
        }
        return 0;
    } catch (const std::exception& e) {
        std::string message = e.what();
        for (auto& c : message) {
            if (c == '\n') c = ';';
        }
        std::cerr << "error: " << message << "\n";
        return 1;
    }
}
