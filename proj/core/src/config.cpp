#include "navi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

namespace navi {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("value of '" + key + "' is not a number: '" + v + "'");
    }
    if (pos != v.size() || !std::isfinite(d))
        throw ConfigError("value of '" + key + "' is not a number: '" + v + "'");
    return d;
}

long to_long(const std::string& v, const std::string& key) {
    double d = to_double(v, key);
    if (d != std::floor(d)) throw ConfigError("value of '" + key + "' must be an integer");
    return static_cast<long>(d);
}

}  // namespace

Strategy strategy_from_string(const std::string& s) {
    if (s == "navi") return Strategy::Navi;
    if (s == "all_lte") return Strategy::AllLte;
    throw ConfigError("unknown strategy '" + s + "' (expected navi or all_lte)");
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        int lo = static_cast<int>(to_long(trim(s.substr(0, dots)), "range"));
        int hi = static_cast<int>(to_long(trim(s.substr(dots + 2)), "range"));
        if (hi < lo) throw ConfigError("descending range '" + s + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(static_cast<int>(to_long(tok, "list")));
    }
    if (out.empty()) throw ConfigError("empty integer list '" + s + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(to_double(tok, "list"));
    }
    if (out.empty()) throw ConfigError("empty list '" + s + "'");
    return out;
}

std::vector<Strategy> parse_strategy_list(const std::string& s) {
    std::vector<Strategy> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(strategy_from_string(tok));
    }
    if (out.empty()) throw ConfigError("empty strategy list");
    return out;
}

Rect parse_area(const std::string& s) {
    auto x = s.find('x');
    if (x != std::string::npos && s.find(',') == std::string::npos) {
        double w = to_double(trim(s.substr(0, x)), "area");
        double h = to_double(trim(s.substr(x + 1)), "area");
        if (w <= 0 || h <= 0) throw ConfigError("area dimensions must be positive");
        return Rect{{0.0, 0.0}, {w, h}};
    }
    auto vals = parse_double_list(s);
    if (vals.size() != 4)
        throw ConfigError("area must be WIDTHxHEIGHT or x0,y0,x1,y1: '" + s + "'");
    Rect r{{vals[0], vals[1]}, {vals[2], vals[3]}};
    r.validate();
    return r;
}

void ScenarioConfig::validate() const {
    if (vehicles < 1) throw ConfigError("vehicles must be >= 1");
    if (duration_s <= 0) throw ConfigError("duration must be positive");
    if (cam_frequency_hz <= 0 || server_update_hz <= 0)
        throw ConfigError("frequencies must be positive");
    if (request_frequency_hz < 0) throw ConfigError("request frequency must be >= 0");
    if (nt_timeout_s <= 0) throw ConfigError("nt_timeout must be positive");
    if (speed_min_kmh <= 0 || speed_max_kmh < speed_min_kmh)
        throw ConfigError("speed range invalid");
    if (speed_max_kmh > max_speed_kmh)
        throw ConfigError("speed_max exceeds max plausible speed");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (hop_limit < 1) throw ConfigError("hop_limit must be >= 1");
    if (cell_m <= 0) throw ConfigError("zone cell must be positive");
    if (sweep_k.empty() || sweep_tx_dbm.empty() || sweep_strategies.empty())
        throw ConfigError("sweep lists must be non-empty");
    try {
        capability_mix.validate();
        area.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& source_name) {
    ScenarioConfig sc;
    using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;
    // One setter per recognized [section] key; anything else is rejected by name.
    static const std::map<std::string, std::map<std::string, Setter>> schema = {
        {"scenario",
         {
             {"trace", [](auto& c, auto&, auto& v) { c.trace = v; }},
             {"vehicles",
              [](auto& c, auto& k, auto& v) { c.vehicles = static_cast<int>(to_long(v, k)); }},
             {"duration_s", [](auto& c, auto& k, auto& v) { c.duration_s = to_double(v, k); }},
             {"area", [](auto& c, auto&, auto& v) { c.area = parse_area(v); }},
             {"seed",
              [](auto& c, auto& k, auto& v) {
                  c.seed = static_cast<std::uint64_t>(to_long(v, k));
              }},
             {"speed_min_kmh",
              [](auto& c, auto& k, auto& v) { c.speed_min_kmh = to_double(v, k); }},
             {"speed_max_kmh",
              [](auto& c, auto& k, auto& v) { c.speed_max_kmh = to_double(v, k); }},
             {"max_speed_kmh",
              [](auto& c, auto& k, auto& v) { c.max_speed_kmh = to_double(v, k); }},
         }},
        {"beaconing",
         {
             {"cam_frequency_hz",
              [](auto& c, auto& k, auto& v) { c.cam_frequency_hz = to_double(v, k); }},
             {"cam_jitter_ms",
              [](auto& c, auto& k, auto& v) { c.cam_jitter_ms = to_double(v, k); }},
             {"nt_timeout_s",
              [](auto& c, auto& k, auto& v) { c.nt_timeout_s = to_double(v, k); }},
             {"server_update_hz",
              [](auto& c, auto& k, auto& v) { c.server_update_hz = to_double(v, k); }},
         }},
        {"radio",
         {
             {"model", [](auto& c, auto&, auto& v) { c.radio_model = v; }},
             {"tx_power_dbm",
              [](auto& c, auto& k, auto& v) { c.tx_power_dbm = to_double(v, k); }},
             {"rx_sensitivity_dbm",
              [](auto& c, auto& k, auto& v) { c.rx_sensitivity_dbm = to_double(v, k); }},
             {"frequency_ghz",
              [](auto& c, auto& k, auto& v) { c.frequency_ghz = to_double(v, k); }},
         }},
        {"request",
         {
             {"frequency_hz",
              [](auto& c, auto& k, auto& v) { c.request_frequency_hz = to_double(v, k); }},
             {"payload_bytes",
              [](auto& c, auto& k, auto& v) { c.payload_bytes = to_long(v, k); }},
             {"k", [](auto& c, auto& k, auto& v) { c.k = static_cast<int>(to_long(v, k)); }},
             {"hop_limit",
              [](auto& c, auto& k, auto& v) { c.hop_limit = static_cast<int>(to_long(v, k)); }},
             {"validity_s", [](auto& c, auto& k, auto& v) { c.validity_s = to_double(v, k); }},
             {"strategy",
              [](auto& c, auto&, auto& v) { c.strategy = strategy_from_string(v); }},
         }},
        {"latency",
         {
             {"short_range_ms",
              [](auto& c, auto& k, auto& v) { c.short_range_ms = to_double(v, k); }},
             {"lte_down_ms", [](auto& c, auto& k, auto& v) { c.lte_down_ms = to_double(v, k); }},
             {"lte_up_ms", [](auto& c, auto& k, auto& v) { c.lte_up_ms = to_double(v, k); }},
         }},
        {"sizes",
         {
             {"cam_bytes", [](auto& c, auto& k, auto& v) { c.sizes.cam = to_long(v, k); }},
             {"nt_upload_base_bytes",
              [](auto& c, auto& k, auto& v) { c.sizes.nt_upload_base = to_long(v, k); }},
             {"nt_upload_entry_bytes",
              [](auto& c, auto& k, auto& v) { c.sizes.nt_upload_entry = to_long(v, k); }},
             {"vi_notify_base_bytes",
              [](auto& c, auto& k, auto& v) { c.sizes.vi_notify_base = to_long(v, k); }},
             {"request_bytes",
              [](auto& c, auto& k, auto& v) { c.sizes.request = to_long(v, k); }},
             {"lte_header_bytes",
              [](auto& c, auto& k, auto& v) { c.sizes.lte_header = to_long(v, k); }},
             {"short_range_header_bytes",
              [](auto& c, auto& k, auto& v) { c.sizes.short_range_header = to_long(v, k); }},
         }},
        {"zones",
         {
             {"cell_m", [](auto& c, auto& k, auto& v) { c.cell_m = to_double(v, k); }},
         }},
        {"capabilities",
         {
             {"both", [](auto& c, auto& k, auto& v) { c.capability_mix.both = to_double(v, k); }},
             {"lte_only",
              [](auto& c, auto& k, auto& v) { c.capability_mix.lte_only = to_double(v, k); }},
             {"short_range_only",
              [](auto& c, auto& k, auto& v) {
                  c.capability_mix.short_range_only = to_double(v, k);
              }},
         }},
        {"sweep",
         {
             {"k_values", [](auto& c, auto&, auto& v) { c.sweep_k = parse_int_list(v); }},
             {"tx_powers_dbm",
              [](auto& c, auto&, auto& v) { c.sweep_tx_dbm = parse_double_list(v); }},
             {"strategies",
              [](auto& c, auto&, auto& v) { c.sweep_strategies = parse_strategy_list(v); }},
         }},
    };

    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto where = [&] { return source_name + ":" + std::to_string(line_no); };
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where() + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema.count(section))
                throw ConfigError(where() + ": unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where() + ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where() + ": key '" + key + "' outside any [section]");
        const auto& keys = schema.at(section);
        auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError(where() + ": unknown key '" + key + "' in section [" + section +
                              "]");
        try {
            it->second(sc, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where() + ": " + e.what());
        }
    }
    sc.validate();
    return sc;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ScenarioConfig sc = parse_scenario_config(in, path);
    sc.base_dir = std::filesystem::path(path).parent_path().string();
    return sc;
}

SimConfig make_sim_config(const ScenarioConfig& sc, int k, double tx_power_dbm,
                          Strategy strategy, std::uint64_t seed) {
    SimConfig cfg;
    cfg.duration_s = sc.duration_s;
    cfg.cam_period_s = 1.0 / sc.cam_frequency_hz;
    cfg.cam_jitter_s = sc.cam_jitter_ms / 1000.0;
    cfg.nt_timeout_s = sc.nt_timeout_s;
    cfg.upload_period_s = 1.0 / sc.server_update_hz;
    cfg.request_period_s =
        sc.request_frequency_hz > 0 ? 1.0 / sc.request_frequency_hz : 0.0;
    cfg.short_range_latency_s = sc.short_range_ms / 1000.0;
    cfg.lte_down_latency_s = sc.lte_down_ms / 1000.0;
    cfg.lte_up_latency_s = sc.lte_up_ms / 1000.0;
    cfg.sizes = sc.sizes;
    cfg.radio.tx_power_dbm = tx_power_dbm;
    cfg.radio.rx_sensitivity_dbm = sc.rx_sensitivity_dbm;
    cfg.radio.frequency_hz = sc.frequency_ghz * 1e9;
    if (sc.radio_model == "friis") {
        cfg.radio.model = RadioModel::FriisThreshold;
    } else if (sc.radio_model.rfind("fixed:", 0) == 0) {
        cfg.radio.model = RadioModel::FixedRange;
        cfg.radio.fixed_range_m = to_double(sc.radio_model.substr(6), "radio model");
    } else {
        throw ConfigError("unknown radio model '" + sc.radio_model +
                          "' (expected friis or fixed:<meters>)");
    }
    cfg.zone_cell_m = sc.cell_m;
    cfg.staleness_bound_s = sc.nt_timeout_s;
    cfg.strategy = strategy;
    cfg.k = k;
    cfg.hop_limit = sc.hop_limit;
    cfg.request_validity_s = sc.validity_s;
    cfg.payload_bytes = sc.payload_bytes;
    cfg.scenario_area = sc.area;
    cfg.capability_mix = sc.capability_mix;
    cfg.seed = seed;
    return cfg;
}

MobilityTrace load_configured_trace(const ScenarioConfig& sc,
                                    std::vector<std::string>* warnings) {
    TraceLimits limits{kmh_to_mps(sc.max_speed_kmh)};
    if (sc.trace == "synthetic")
        return generate_synthetic_trace(sc.seed, sc.vehicles, sc.area, sc.duration_s,
                                        {kmh_to_mps(sc.speed_min_kmh),
                                         kmh_to_mps(sc.speed_max_kmh)});
    std::filesystem::path p(sc.trace);
    if (p.is_relative() && !sc.base_dir.empty()) p = std::filesystem::path(sc.base_dir) / p;
    return load_ns2_trace_file(p.string(), warnings, limits);
}

}  // namespace navi
