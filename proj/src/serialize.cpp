#include "kernoil/serialize.hpp"

#include "kernoil/config.hpp"
#include "kernoil/ingest.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace kernoil {

namespace {

using nlohmann::json;

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.size();
    if (rows == 0) return Eigen::MatrixXd(0, 0);
    const auto cols = j.at(0).size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (j.at(i).size() != cols) throw std::runtime_error("json: ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j.at(i).at(c).get<double>();
        }
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
    return v;
}

json provenance_to_json(const Provenance& prov) {
    return json{{"config_hash", hex64(prov.config_hash)},
                {"seed", prov.seed},
                {"version", prov.version.empty() ? kVersion : prov.version}};
}

}  // namespace

std::string provenance_header(const Provenance& prov) {
    std::string out;
    out += "# config_hash: " + hex64(prov.config_hash) + "\n";
    out += "# seed: " + std::to_string(prov.seed) + "\n";
    out += "# version: " + (prov.version.empty() ? std::string(kVersion) : prov.version) + "\n";
    return out;
}

void emit_table(const ResultTable& table, TableFormat format, const std::filesystem::path& path,
                const Provenance& prov) {
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::invalid_argument("emit_table: row width does not match the header");
        }
    }
    auto out = open_out(path);
    if (format == TableFormat::csv) {
        out << provenance_header(prov);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << table.columns[c];
        }
        out << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ",";
                std::visit(
                    [&](const auto& cell) {
                        using T = std::decay_t<decltype(cell)>;
                        if constexpr (std::is_same_v<T, double>) {
                            out << fixed6(cell);
                        } else {
                            out << cell;
                        }
                    },
                    row[c]);
            }
            out << "\n";
        }
    } else {
        json j;
        j["provenance"] = provenance_to_json(prov);
        j["columns"] = table.columns;
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r = json::array();
            for (const auto& cell : row) {
                std::visit([&](const auto& v) { r.push_back(v); }, cell);
            }
            rows.push_back(std::move(r));
        }
        j["rows"] = std::move(rows);
        out << j.dump(1) << "\n";
    }
}

ResultTable read_table_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    json j;
    in >> j;
    ResultTable table;
    table.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
        std::vector<TableCell> cells;
        for (const auto& cell : row) {
            if (cell.is_string()) {
                cells.emplace_back(cell.get<std::string>());
            } else if (cell.is_number_integer()) {
                cells.emplace_back(cell.get<std::int64_t>());
            } else {
                cells.emplace_back(cell.get<double>());
            }
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

ResultTable irf_table(const IrfSet& irf, const std::vector<std::string>& shocks,
                      const std::vector<std::string>& variables) {
    ResultTable t;
    t.columns = {"shock", "variable", "horizon", "response"};
    for (std::size_t j = 0; j < irf.responses.size(); ++j) {
        const auto& resp = irf.responses[j];
        for (Eigen::Index i = 0; i < resp.rows(); ++i) {
            for (Eigen::Index h = 0; h < resp.cols(); ++h) {
                t.rows.push_back({shocks[j], variables[static_cast<std::size_t>(i)],
                                  static_cast<std::int64_t>(h), resp(i, h)});
            }
        }
    }
    return t;
}

ResultTable bands_table(const BandSet& bands, const std::vector<std::string>& shocks,
                        const std::vector<std::string>& variables) {
    ResultTable t;
    t.columns = {"shock", "variable", "horizon", "point", "se", "lo1", "hi1", "lo2", "hi2"};
    for (std::size_t j = 0; j < bands.point.responses.size(); ++j) {
        const auto& point = bands.point.responses[j];
        const auto& se = bands.se[j];
        for (Eigen::Index i = 0; i < point.rows(); ++i) {
            for (Eigen::Index h = 0; h < point.cols(); ++h) {
                const double p = point(i, h);
                const double s = se(i, h);
                t.rows.push_back({shocks[j], variables[static_cast<std::size_t>(i)],
                                  static_cast<std::int64_t>(h), p, s, p - s, p + s, p - 2 * s,
                                  p + 2 * s});
            }
        }
    }
    return t;
}

ResultTable fevd_table(const FevdTable& table, const std::vector<std::string>& shocks,
                       const std::vector<std::string>& variables) {
    ResultTable t;
    t.columns = {"variable", "shock", "horizon", "share"};
    for (std::size_t i = 0; i < table.shares.size(); ++i) {
        for (std::size_t c = 0; c < table.horizons.size(); ++c) {
            for (Eigen::Index j = 0; j < table.shares[i].rows(); ++j) {
                const int h = table.horizons[c];
                t.rows.push_back({variables[i], shocks[static_cast<std::size_t>(j)],
                                  h == kInfiniteHorizon ? TableCell{std::string("inf")}
                                                        : TableCell{static_cast<std::int64_t>(h)},
                                  table.shares[i](j, static_cast<Eigen::Index>(c))});
            }
        }
    }
    return t;
}

ResultTable histdecomp_table(const HistDecomp& hd, Eigen::Index variable, Month from) {
    ResultTable t;
    t.columns.push_back("date");
    for (const auto& label : hd.labels) t.columns.push_back(label);
    t.columns.push_back("base");
    t.columns.push_back("observed");
    for (Eigen::Index row = 0; row < hd.t_eff(); ++row) {
        if (hd.date_at(row) < from) continue;
        std::vector<TableCell> cells;
        cells.emplace_back(format_date(hd.date_at(row), hd.freq));
        for (const auto& contrib : hd.contributions) cells.emplace_back(contrib(row, variable));
        cells.emplace_back(hd.base(row, variable));
        cells.emplace_back(hd.observed(row, variable));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

ResultTable counterfactual_table(const std::vector<CounterfactualPath>& paths,
                                 const Eigen::VectorXd& actual_levels) {
    if (paths.empty()) throw std::invalid_argument("counterfactual_table: no paths");
    const Eigen::Index len = paths.front().levels.size();
    for (const auto& p : paths) {
        if (p.levels.size() != len || p.start != paths.front().start) {
            throw std::invalid_argument("counterfactual_table: misaligned paths");
        }
    }
    ResultTable t;
    t.columns = {"date", "actual"};
    for (const auto& p : paths) {
        t.columns.push_back("less-" + (p.shock_removed.empty() ? "none" : p.shock_removed));
    }
    for (Eigen::Index row = 0; row < len; ++row) {
        std::vector<TableCell> cells;
        cells.emplace_back(format_date(paths.front().start.plus(static_cast<int>(row),
                                                                paths.front().freq),
                                       paths.front().freq));
        cells.emplace_back(actual_levels[row]);
        for (const auto& p : paths) cells.emplace_back(p.levels[row]);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

ResultTable network_table(const EmploymentResponse& resp) {
    ResultTable t;
    t.columns = {"sector", "own_income", "own_demand", "network", "total"};
    for (Eigen::Index j = 0; j < resp.dln_l.size(); ++j) {
        t.rows.push_back({static_cast<std::int64_t>(j + 1), resp.own_income[j],
                          resp.own_demand[j], resp.network[j], resp.dln_l[j]});
    }
    return t;
}

ResultTable wage_table(const WageBands& bands, const std::string& shock) {
    ResultTable t;
    t.columns = {"shock", "horizon", "phi", "cumulative", "se", "lo1", "hi1", "lo2", "hi2"};
    for (Eigen::Index h = 0; h < bands.point.phi.size(); ++h) {
        const double c = bands.point.cumulative[h];
        const double s = bands.se_cumulative[h];
        t.rows.push_back({shock, static_cast<std::int64_t>(h), bands.point.phi[h], c, s, c - s,
                          c + s, c - 2 * s, c + 2 * s});
    }
    return t;
}

void write_panel_csv(const TimeSeriesFrame& frame, const std::filesystem::path& path,
                     const Provenance& prov) {
    auto out = open_out(path);
    out << provenance_header(prov);
    out << "date";
    for (const auto& name : frame.names) out << "," << name;
    out << "\n";
    for (Eigen::Index r = 0; r < frame.rows(); ++r) {
        out << format_date(frame.date_at(r), frame.freq);
        for (Eigen::Index c = 0; c < frame.cols(); ++c) {
            out << ",";
            if (!frame.mask(r, c)) out << full(frame.values(r, c));
        }
        out << "\n";
    }
}

TimeSeriesFrame read_panel_csv(const std::filesystem::path& path) {
    CsvSchema schema;
    schema.freq = Freq::monthly;
    for (const auto& name : panel_columns()) schema.columns.push_back({name, name, false});
    const auto series = load_csv(path, schema);
    return build_panel(series, DateRange{series.front().start, series.front().end()});
}

void write_model_json(const VarModel& model, const std::filesystem::path& path,
                      const Provenance& prov) {
    json j;
    j["type"] = "var-model";
    j["provenance"] = provenance_to_json(prov);
    j["p"] = model.p;
    j["freq"] = to_string(model.freq);
    j["variables"] = model.names;
    j["sample_start"] = format_month(model.sample_start);
    j["sample_end"] = format_month(model.sample_end);
    j["intercept"] = vector_to_json(model.intercept);
    json coeffs = json::array();
    for (const auto& a : model.coeffs) coeffs.push_back(matrix_to_json(a));
    j["coeffs"] = std::move(coeffs);
    j["sigma_u"] = matrix_to_json(model.sigma_u);
    j["residuals"] = matrix_to_json(model.residuals);
    auto out = open_out(path);
    out << j.dump(1) << "\n";
}

VarModel read_model_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    json j;
    in >> j;
    if (j.value("type", "") != "var-model") {
        throw std::runtime_error(path.string() + ": not a var-model file");
    }
    VarModel model;
    model.p = j.at("p").get<int>();
    model.freq = freq_from_string(j.at("freq").get<std::string>());
    model.names = j.at("variables").get<std::vector<std::string>>();
    model.sample_start = parse_month(j.at("sample_start").get<std::string>());
    model.sample_end = parse_month(j.at("sample_end").get<std::string>());
    model.intercept = vector_from_json(j.at("intercept"));
    for (const auto& a : j.at("coeffs")) model.coeffs.push_back(matrix_from_json(a));
    model.sigma_u = matrix_from_json(j.at("sigma_u"));
    model.residuals = matrix_from_json(j.at("residuals"));
    if (static_cast<int>(model.coeffs.size()) != model.p) {
        throw std::runtime_error(path.string() + ": coefficient count does not match p");
    }
    return model;
}

void write_structural_json(const StructuralModel& s, const SignConvention& sc,
                           const std::filesystem::path& path, const Provenance& prov) {
    json j;
    j["type"] = "structural-model";
    j["provenance"] = provenance_to_json(prov);
    j["labels"] = s.labels;
    j["freq"] = to_string(s.freq);
    j["sample_start"] = format_month(s.sample_start);
    j["b0inv"] = matrix_to_json(s.b0inv);
    j["sigma_w"] = vector_to_json(s.sigma_w);
    j["signs"] = vector_to_json(sc.signs);
    j["zero_ties"] = sc.zero_ties;
    j["shocks"] = matrix_to_json(s.shocks);
    auto out = open_out(path);
    out << j.dump(1) << "\n";
}

StructuralFile read_structural_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    json j;
    in >> j;
    if (j.value("type", "") != "structural-model") {
        throw std::runtime_error(path.string() + ": not a structural-model file");
    }
    StructuralFile f;
    f.model.labels = j.at("labels").get<std::vector<std::string>>();
    f.model.freq = freq_from_string(j.at("freq").get<std::string>());
    f.model.sample_start = parse_month(j.at("sample_start").get<std::string>());
    f.model.b0inv = matrix_from_json(j.at("b0inv"));
    f.model.sigma_w = vector_from_json(j.at("sigma_w"));
    f.model.shocks = matrix_from_json(j.at("shocks"));
    f.signs.signs = vector_from_json(j.at("signs"));
    f.signs.zero_ties = j.at("zero_ties").get<std::vector<int>>();
    return f;
}

IONetwork read_network_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    json j;
    in >> j;
    IONetwork net;
    const auto n = j.at("n").get<Eigen::Index>();
    const auto& a = j.at("A");
    if (static_cast<Eigen::Index>(a.size()) != n * n) {
        throw std::runtime_error(path.string() + ": A must hold n*n row-major entries");
    }
    net.A.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < n; ++c) {
            net.A(i, c) = a.at(static_cast<std::size_t>(i * n + c)).get<double>();
        }
    }
    net.alpha_l = vector_from_json(j.at("alpha_l"));
    net.beta = vector_from_json(j.at("beta"));
    net.eta = j.at("eta").get<double>();
    net.sales = vector_from_json(j.at("sales"));
    net.b = vector_from_json(j.at("b"));
    net.validate();
    return net;
}

}  // namespace kernoil
