#include <sstream>

#include "doctest.h"
#include "navi/config.hpp"

using namespace navi;

namespace {

ScenarioConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_scenario_config(is, "<test>");
}

}  // namespace

TEST_CASE("missing keys take the documented defaults") {
    auto sc = parse("");
    CHECK(sc.cam_frequency_hz == 1.0);
    CHECK(sc.nt_timeout_s == 5.0);
    CHECK(sc.server_update_hz == 1.0);
    CHECK(sc.request_frequency_hz == 1.0);
    CHECK(sc.duration_s == 180.0);
    CHECK(sc.vehicles == 45);
    CHECK(sc.sweep_tx_dbm == std::vector<double>{16.0, 21.0, 23.0});
    CHECK(sc.area.max.x == 600.0);
    CHECK(sc.area.max.y == 730.0);
    CHECK(sc.trace == "synthetic");
    CHECK(sc.cell_m == 50.0);
    CHECK(sc.capability_mix.both == 1.0);
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse("[scenario]\nmade_up = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("made_up") != std::string::npos);
        CHECK(std::string(e.what()).find("scenario") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("[nonsense]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("orphan = 1\n"), ConfigError);
}

TEST_CASE("values parse with sections, comments and whitespace") {
    auto sc = parse(
        "# reference setup\n"
        "[scenario]\n"
        "vehicles = 12   # small\n"
        "duration_s = 60\n"
        "seed = 9\n"
        "area = 500x400\n"
        "[radio]\n"
        "tx_power_dbm = 16\n"
        "rx_sensitivity_dbm = -77\n"
        "[request]\n"
        "k = 7\n"
        "strategy = all_lte\n"
        "[zones]\n"
        "cell_m = 25\n");
    CHECK(sc.vehicles == 12);
    CHECK(sc.duration_s == 60.0);
    CHECK(sc.seed == 9);
    CHECK(sc.area.max.x == 500.0);
    CHECK(sc.area.max.y == 400.0);
    CHECK(sc.tx_power_dbm == 16.0);
    CHECK(sc.rx_sensitivity_dbm == -77.0);
    CHECK(sc.k == 7);
    CHECK(sc.strategy == Strategy::AllLte);
    CHECK(sc.cell_m == 25.0);
}

TEST_CASE("bad numerics name the offending key") {
    try {
        parse("[scenario]\nduration_s = abc\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("duration_s") != std::string::npos);
    }
}

TEST_CASE("list and range syntax") {
    CHECK(parse_int_list("1..5") == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(parse_int_list("1,5,10") == std::vector<int>{1, 5, 10});
    CHECK(parse_int_list("7") == std::vector<int>{7});
    CHECK_THROWS_AS(parse_int_list("5..1"), ConfigError);
    CHECK_THROWS_AS(parse_int_list(""), ConfigError);
    CHECK(parse_double_list("16,21,23") == std::vector<double>{16.0, 21.0, 23.0});
    auto strategies = parse_strategy_list("navi,all_lte");
    REQUIRE(strategies.size() == 2);
    CHECK(strategies[0] == Strategy::Navi);
    CHECK(strategies[1] == Strategy::AllLte);
    CHECK_THROWS_AS(parse_strategy_list("navi,bogus"), ConfigError);
}

TEST_CASE("area accepts WIDTHxHEIGHT and full rectangles") {
    Rect box = parse_area("600x730");
    CHECK(box.min.x == 0.0);
    CHECK(box.max.y == 730.0);
    Rect full = parse_area("10,20,110,220");
    CHECK(full.min.x == 10.0);
    CHECK(full.max.y == 220.0);
    CHECK_THROWS_AS(parse_area("0x10"), ConfigError);
    CHECK_THROWS_AS(parse_area("1,2,3"), ConfigError);
}

TEST_CASE("sweep lists parse from the config file") {
    auto sc = parse("[sweep]\nk_values = 1..4\ntx_powers_dbm = 16,23\nstrategies = navi\n");
    CHECK(sc.sweep_k == std::vector<int>{1, 2, 3, 4});
    CHECK(sc.sweep_tx_dbm == std::vector<double>{16.0, 23.0});
    CHECK(sc.sweep_strategies == std::vector<Strategy>{Strategy::Navi});
}

TEST_CASE("validation rejects inconsistent scenarios") {
    CHECK_THROWS_AS(parse("[scenario]\nvehicles = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[beaconing]\ncam_frequency_hz = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[scenario]\nspeed_min_kmh = 80\nspeed_max_kmh = 90\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse("[capabilities]\nboth = 0.5\n"), ConfigError);  // sums to 0.5
    CHECK_NOTHROW(parse("[capabilities]\nboth = 0.5\nlte_only = 0.25\n"
                        "short_range_only = 0.25\n"));
}

TEST_CASE("sim config resolution maps units and the radio model") {
    auto sc = parse(
        "[latency]\nshort_range_ms = 5\nlte_down_ms = 50\nlte_up_ms = 60\n"
        "[radio]\nmodel = fixed:120\n"
        "[beaconing]\ncam_jitter_ms = 40\n");
    SimConfig cfg = make_sim_config(sc, 3, 21.0, Strategy::Navi, 77);
    CHECK(cfg.short_range_latency_s == doctest::Approx(0.005));
    CHECK(cfg.lte_down_latency_s == doctest::Approx(0.050));
    CHECK(cfg.lte_up_latency_s == doctest::Approx(0.060));
    CHECK(cfg.radio.model == RadioModel::FixedRange);
    CHECK(cfg.radio.fixed_range_m == 120.0);
    CHECK(cfg.cam_jitter_s == doctest::Approx(0.040));
    CHECK(cfg.k == 3);
    CHECK(cfg.radio.tx_power_dbm == 21.0);
    CHECK(cfg.seed == 77);
    CHECK(cfg.staleness_bound_s == 5.0);

    auto bad = parse("[radio]\nmodel = quantum\n");
    CHECK_THROWS_AS(make_sim_config(bad, 1, 16.0, Strategy::Navi, 1), ConfigError);
}

TEST_CASE("synthetic trace resolution respects the scenario block") {
    auto sc = parse("[scenario]\nvehicles = 6\nduration_s = 30\narea = 200x200\nseed = 4\n");
    auto trace = load_configured_trace(sc);
    CHECK(trace.vehicle_count() == 6);
    CHECK(trace.duration() >= 30.0);
}
