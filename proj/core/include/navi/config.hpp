#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "navi/simcore.hpp"
#include "navi/types.hpp"

namespace navi {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Full scenario description: trace source, Table-I style traffic
/// defaults, radio/zone/latency/size knobs and the sweep lists. Parsed
/// from a line-oriented `key = value` file with `[section]` headers.
struct ScenarioConfig {
    // [scenario]
    std::string trace = "synthetic";  // "synthetic" or an NS-2 trace path
    int vehicles = 45;
    double duration_s = 180.0;
    Rect area{{0.0, 0.0}, {600.0, 730.0}};
    std::uint64_t seed = 1;
    double speed_min_kmh = 10.0;
    double speed_max_kmh = 50.0;
    double max_speed_kmh = 70.0;

    // [beaconing]
    double cam_frequency_hz = 1.0;
    double cam_jitter_ms = 0.0;
    double nt_timeout_s = 5.0;
    double server_update_hz = 1.0;

    // [radio]
    std::string radio_model = "friis";  // "friis" or "fixed:<meters>"
    double tx_power_dbm = 23.0;
    double rx_sensitivity_dbm = -85.0;
    double frequency_ghz = 5.9;

    // [request]
    double request_frequency_hz = 1.0;
    long payload_bytes = 500;
    int k = 10;
    int hop_limit = 1;
    double validity_s = 1.0;
    Strategy strategy = Strategy::Navi;

    // [latency]
    double short_range_ms = 5.0;
    double lte_down_ms = 50.0;
    double lte_up_ms = 60.0;

    // [sizes]
    MessageSizes sizes;

    // [zones]
    double cell_m = 50.0;

    // [capabilities]
    CapabilityMix capability_mix;

    // [sweep]
    std::vector<int> sweep_k = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> sweep_tx_dbm = {16.0, 21.0, 23.0};
    std::vector<Strategy> sweep_strategies = {Strategy::Navi, Strategy::AllLte};

    /// Directory of the config file; relative trace paths resolve here.
    std::string base_dir;

    void validate() const;
};

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& source_name);
ScenarioConfig load_scenario_config(const std::string& path);

/// "1..20" or "1,2,5"; values must be positive and ascending.
std::vector<int> parse_int_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);
std::vector<Strategy> parse_strategy_list(const std::string& s);
/// "600x730" (origin box) or "x0,y0,x1,y1".
Rect parse_area(const std::string& s);

Strategy strategy_from_string(const std::string& s);

/// Resolve one sweep point into an engine config.
SimConfig make_sim_config(const ScenarioConfig& sc, int k, double tx_power_dbm,
                          Strategy strategy, std::uint64_t seed);

/// Load or synthesize the configured mobility trace.
MobilityTrace load_configured_trace(const ScenarioConfig& sc,
                                    std::vector<std::string>* warnings = nullptr);

}  // namespace navi
