#include "kernoil/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kernoil {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

int to_int(const std::string& key, const std::string& value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::runtime_error("config: key '" + key + "' has non-integer value '" + value + "'");
    }
    return out;
}

}  // namespace

std::vector<int> parse_horizons(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item == "inf" || item == "infinity") {
            out.push_back(-1);
        } else {
            out.push_back(to_int("horizons", item));
        }
    }
    if (out.empty()) throw std::runtime_error("config: empty horizon list");
    return out;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::uint64_t h = 14695981039346656037ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");

    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(row) + " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty()) throw std::runtime_error("config: empty key at line " + std::to_string(row));
        if (!kv.emplace(key, value).second) {
            throw std::runtime_error("config: duplicate key '" + key + "'");
        }
    }

    RunConfig cfg;
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
    auto resolve = [&](const std::string& value) {
        std::filesystem::path p = value;
        return p.is_absolute() ? p : base / p;
    };
    auto take = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    auto require_path = [&](const char* key, std::filesystem::path& dest) {
        const std::string* v = take(key);
        if (!v) throw std::runtime_error(std::string("config: missing required key '") + key + "'");
        dest = resolve(*v);
    };

    require_path("oil_production", cfg.oil_production);
    require_path("real_activity", cfg.real_activity);
    require_path("oil_price_nominal", cfg.oil_price_nominal);
    require_path("cpi", cfg.cpi);
    require_path("employment", cfg.employment);
    require_path("wages_nominal", cfg.wages_nominal);

    if (const auto* v = take("window_start")) cfg.panel_window.first = parse_month(*v);
    if (const auto* v = take("window_end")) cfg.panel_window.last = parse_month(*v);
    if (const auto* v = take("lags")) cfg.lags = to_int("lags", *v);
    if (const auto* v = take("horizon")) cfg.horizon = to_int("horizon", *v);
    if (const auto* v = take("fevd_horizons")) cfg.fevd_horizons = parse_horizons(*v);
    if (const auto* v = take("reps")) cfg.replications = to_int("reps", *v);
    if (const auto* v = take("block")) cfg.block_length = to_int("block", *v);
    if (const auto* v = take("seed")) cfg.seed = static_cast<std::uint64_t>(std::stoull(*v));
    if (const auto* v = take("threads")) cfg.threads = to_int("threads", *v);
    if (const auto* v = take("centering")) cfg.centering = *v;
    if (const auto* v = take("histdecomp_from")) cfg.histdecomp_from = parse_month(*v);
    if (const auto* v = take("counterfactual_early_start")) cfg.counterfactual_early.first = parse_month(*v);
    if (const auto* v = take("counterfactual_early_end")) cfg.counterfactual_early.last = parse_month(*v);
    if (const auto* v = take("counterfactual_late_start")) cfg.counterfactual_late.first = parse_month(*v);
    if (const auto* v = take("counterfactual_late_end")) cfg.counterfactual_late.last = parse_month(*v);
    if (const auto* v = take("wage_lags")) cfg.wage_lags = to_int("wage_lags", *v);
    if (const auto* v = take("wage_block")) cfg.wage_block = to_int("wage_block", *v);
    if (const auto* v = take("wage_reps")) cfg.wage_replications = to_int("wage_reps", *v);
    if (const auto* v = take("output_dir")) cfg.output_dir = resolve(*v);

    if (const char* env = std::getenv("KERNOIL_OUTPUT_DIR")) cfg.output_dir = env;

    if (cfg.centering != "mean" && cfg.centering != "bjt" && cfg.centering != "none") {
        throw std::runtime_error("config: centering must be one of mean, bjt, none");
    }
    if (cfg.lags < 1) throw std::runtime_error("config: lags must be >= 1");
    if (cfg.horizon < 0) throw std::runtime_error("config: horizon must be >= 0");
    if (cfg.replications < 2) throw std::runtime_error("config: reps must be >= 2");
    if (cfg.block_length < 1) throw std::runtime_error("config: block must be >= 1");
    if (cfg.panel_window.first > cfg.panel_window.last) {
        throw std::runtime_error("config: window_start is after window_end");
    }
    for (const DateRange& w : {cfg.counterfactual_early, cfg.counterfactual_late}) {
        if (w.first > w.last) throw std::runtime_error("config: counterfactual window is empty");
        if (w.first < cfg.panel_window.first || w.last > cfg.panel_window.last) {
            throw std::runtime_error("config: counterfactual window outside the panel window");
        }
    }

    cfg.config_hash = hash_file(path);
    return cfg;
}

}  // namespace kernoil
