#include "kernoil/config.hpp"
#include "kernoil/ingest.hpp"
#include "kernoil/rng.hpp"
#include "kernoil/serialize.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

using namespace kernoil;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TimeSeriesFrame small_panel() {
    Rng rng(3);
    TimeSeriesFrame f;
    f.start = Month{1990, 2};
    f.freq = Freq::monthly;
    f.names.assign(panel_columns().begin(), panel_columns().end());
    f.values.resize(100, 4);
    for (Eigen::Index t = 0; t < 100; ++t) {
        for (int c = 0; c < 4; ++c) f.values(t, c) = rng.next_normal();
    }
    f.mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(100, 4, false);
    return f;
}

}  // namespace

TEST_CASE("panel CSV round trip is exact") {
    const TimeSeriesFrame f = small_panel();
    const auto path = std::filesystem::temp_directory_path() / "kernoil_panel.csv";
    write_panel_csv(f, path, Provenance{0x1234, 42, ""});
    const TimeSeriesFrame back = read_panel_csv(path);
    CHECK(back.start == f.start);
    CHECK(back.names == f.names);
    REQUIRE(back.rows() == f.rows());
    CHECK((back.values - f.values).cwiseAbs().maxCoeff() == 0.0);

    const std::string text = slurp(path);
    CHECK(text.find("# config_hash: 0000000000001234") != std::string::npos);
    CHECK(text.find("# seed: 42") != std::string::npos);
    CHECK(text.find("date,oil-production-growth,real-activity,real-oil-price,employment-growth") !=
          std::string::npos);
}

TEST_CASE("model JSON round trip") {
    const TimeSeriesFrame f = small_panel();
    const VarModel model = estimate_ols(f, 2);
    const auto path = std::filesystem::temp_directory_path() / "kernoil_model.json";
    write_model_json(model, path, Provenance{});
    const VarModel back = read_model_json(path);
    CHECK(back.p == model.p);
    CHECK(back.names == model.names);
    CHECK(back.sample_start == model.sample_start);
    CHECK(back.sample_end == model.sample_end);
    CHECK((back.intercept - model.intercept).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 2; ++i) {
        CHECK((back.coeffs[i] - model.coeffs[i]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK((back.sigma_u - model.sigma_u).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.residuals - model.residuals).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("structural JSON round trip keeps shocks and signs") {
    const TimeSeriesFrame f = small_panel();
    const VarModel model = estimate_ols(f, 1);
    const StructuralModel s = identify(model);
    const SignConvention sc = normalize_signs(s.b0inv, 2);
    const auto path = std::filesystem::temp_directory_path() / "kernoil_structural.json";
    write_structural_json(s, sc, path, Provenance{});
    const StructuralFile back = read_structural_json(path);
    CHECK(back.model.labels == s.labels);
    CHECK((back.model.b0inv - s.b0inv).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.model.shocks - s.shocks).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.signs.signs - sc.signs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fevd CSV carries the documented header and 6-decimal cells") {
    const TimeSeriesFrame f = small_panel();
    const VarModel model = estimate_ols(f, 1);
    const StructuralModel s = identify(model);
    const FevdTable table = fevd(model, s.b0inv, {1, 2, kInfiniteHorizon});
    const auto path = std::filesystem::temp_directory_path() / "kernoil_fevd.csv";
    emit_table(fevd_table(table, s.labels, model.names), TableFormat::csv, path, Provenance{});
    const std::string text = slurp(path);
    CHECK(text.find("variable,shock,horizon,share\n") != std::string::npos);
    CHECK(text.find(",inf,") != std::string::npos);
    CHECK(text.find("oil-production-growth,oil-supply,1,100.000000") != std::string::npos);

    // Formatted rows still sum to 100 within a formatting tolerance.
    std::istringstream lines(text.substr(text.find("variable,")));
    std::string line;
    std::getline(lines, line);  // header
    std::map<std::string, double> sums;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        sums[line.substr(0, c1) + "@" + line.substr(c2 + 1, c3 - c2 - 1)] +=
            std::stod(line.substr(c3 + 1));
    }
    REQUIRE(sums.size() == 12);  // 4 variables x 3 horizons
    for (const auto& [key, total] : sums) {
        CHECK(total == doctest::Approx(100.0).epsilon(1e-6));
    }
}

TEST_CASE("an empty counterfactual set is rejected") {
    CHECK_THROWS_AS(counterfactual_table({}, Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("JSON tables round-trip in-memory values exactly") {
    const TimeSeriesFrame f = small_panel();
    const VarModel model = estimate_ols(f, 1);
    const StructuralModel s = identify(model);
    const SignConvention sc = normalize_signs(s.b0inv, 2);
    const MaSequence ma = ma_coefficients(model, s.b0inv, 6);
    const IrfSet irf = impulse_responses(ma, {true, false, false, true}, sc.signs);
    const ResultTable table = irf_table(irf, s.labels, model.names);

    const auto path = std::filesystem::temp_directory_path() / "kernoil_irf.json";
    emit_table(table, TableFormat::json, path, Provenance{7, 9, ""});
    const ResultTable back = read_table_json(path);
    CHECK(back.columns == table.columns);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        REQUIRE(back.rows[r].size() == table.rows[r].size());
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            CHECK(back.rows[r][c] == table.rows[r][c]);
        }
    }
}

TEST_CASE("an empty table renders as a header-only CSV") {
    ResultTable table;
    table.columns = {"variable", "shock", "horizon", "share"};
    const auto path = std::filesystem::temp_directory_path() / "kernoil_empty.csv";
    emit_table(table, TableFormat::csv, path, Provenance{});
    const std::string text = slurp(path);
    CHECK(text.find("variable,shock,horizon,share\n") != std::string::npos);
    CHECK(text.substr(text.size() - std::string("share\n").size()) == "share\n");

    ResultTable bad = table;
    bad.rows.push_back({std::string("x")});
    CHECK_THROWS_AS(emit_table(bad, TableFormat::csv, path, Provenance{}), std::invalid_argument);
}

TEST_CASE("config parser reads keys, defaults, and horizon lists") {
    const auto dir = std::filesystem::temp_directory_path() / "kernoil_cfg";
    std::filesystem::create_directories(dir);
    {
        std::ofstream data(dir / "d.csv");
        data << "date,x\n1990-01,1\n";
    }
    const auto path = dir / "run.toml";
    {
        std::ofstream cfg(path);
        cfg << "# comment\n";
        cfg << "oil_production = d.csv\n";
        cfg << "real_activity = d.csv\n";
        cfg << "oil_price_nominal = d.csv\n";
        cfg << "cpi = d.csv\n";
        cfg << "employment = d.csv\n";
        cfg << "wages_nominal = d.csv\n";
        cfg << "lags = 6\n";
        cfg << "fevd_horizons = 1,4,inf\n";
        cfg << "seed = 99\n";
        cfg << "window_start = 1991-01\n";
        cfg << "window_end = 2000-12\n";
        cfg << "counterfactual_early_start = 1992-01\n";
        cfg << "counterfactual_early_end = 1995-12\n";
        cfg << "counterfactual_late_start = 1996-01\n";
        cfg << "counterfactual_late_end = 2000-12\n";
    }
    const RunConfig cfg = load_config(path);
    CHECK(cfg.lags == 6);
    CHECK(cfg.replications == 2000);  // paper default
    CHECK(cfg.block_length == 24);
    CHECK(cfg.seed == 99);
    CHECK(cfg.fevd_horizons == std::vector<int>{1, 4, kInfiniteHorizon});
    CHECK(cfg.oil_production == dir / "d.csv");
    CHECK(cfg.config_hash == hash_file(path));

    {
        std::ofstream cfg_bad(dir / "bad.toml");
        cfg_bad << "oil_production = d.csv\n";
    }
    CHECK_THROWS_WITH_AS(load_config(dir / "bad.toml"), doctest::Contains("missing required key"),
                         std::runtime_error);

    {
        std::ofstream cfg_bad(dir / "bad2.toml");
        std::ifstream src(path);
        cfg_bad << src.rdbuf();
        cfg_bad << "centering = median\n";
    }
    CHECK_THROWS_WITH_AS(load_config(dir / "bad2.toml"), doctest::Contains("centering"),
                         std::runtime_error);
}

TEST_CASE("read_panel_csv requires the canonical columns") {
    const auto path = std::filesystem::temp_directory_path() / "kernoil_notpanel.csv";
    {
        std::ofstream out(path);
        out << "date,x\n1990-01,1\n1990-02,2\n";
    }
    CHECK_THROWS_WITH_AS(read_panel_csv(path), doctest::Contains("not found"),
                         std::runtime_error);
}
