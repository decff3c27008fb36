#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "navi/scenario.hpp"

using namespace navi;

namespace {

ScenarioConfig small_scenario() {
    std::istringstream is(
        "[scenario]\n"
        "vehicles = 6\n"
        "duration_s = 10\n"
        "area = 250x250\n"
        "seed = 3\n"
        "[radio]\n"
        "rx_sensitivity_dbm = -70\n"
        "[zones]\n"
        "cell_m = 25\n");
    return parse_scenario_config(is, "<test>");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config ids name the sweep point") {
    CHECK(make_config_id(Strategy::Navi, 5, 16.0) == "navi_k5_tx16");
    CHECK(make_config_id(Strategy::AllLte, 45, 23.0) == "all_lte_k45_tx23");
}

TEST_CASE("run_single produces one metrics row per request") {
    ScenarioConfig sc = small_scenario();
    MobilityTrace trace = load_configured_trace(sc);
    auto art = run_single(sc, trace, 3, 23.0, Strategy::Navi, sc.seed);
    CHECK(art.ok());
    CHECK(art.request_rows.size() == 10);  // 10 s at 1 Hz
    for (const auto& row : art.request_rows) {
        CHECK(row.config_id == "navi_k3_tx23");
        CHECK(row.k == 3);
        CHECK(row.vi_count <= 3);
    }
}

TEST_CASE("sweeps cover the cartesian product and merge deterministically") {
    namespace fs = std::filesystem;
    ScenarioConfig sc = small_scenario();
    SweepOptions opts;
    opts.k_values = {1, 2};
    opts.tx_powers_dbm = {16.0, 23.0};
    opts.strategies = {Strategy::Navi, Strategy::AllLte};

    fs::path base = fs::temp_directory_path() / "navi_sweep_test";
    fs::remove_all(base);
    opts.threads = 1;
    REQUIRE(run_sweep(sc, opts, (base / "serial").string()) == 0);
    opts.threads = 4;
    REQUIRE(run_sweep(sc, opts, (base / "threaded").string()) == 0);

    for (const char* f : {"metrics_requests.csv", "metrics_aggregate.csv", "degree_cdf.csv"})
        CHECK(slurp(base / "serial" / f) == slurp(base / "threaded" / f));

    auto rows = parse_requests_csv((base / "serial" / "metrics_requests.csv").string());
    CHECK(rows.size() == 2 * 2 * 2 * 10);  // |k| x |tx| x |strategies| x requests
    std::set<std::string> configs;
    for (const auto& r : rows) configs.insert(r.config_id);
    CHECK(configs.size() == 8);

    // one aggregate row per config for each core metric
    auto agg = parse_aggregate_csv((base / "serial" / "metrics_aggregate.csv").string());
    int covered = 0;
    for (const auto& r : agg)
        if (r.metric == "covered_pct") ++covered;
    CHECK(covered == 8);

    // degree CDF covers both powers, is monotone and ends at 1
    std::ifstream cdf(base / "serial" / "degree_cdf.csv");
    std::string line;
    std::getline(cdf, line);
    std::map<std::string, double> last;
    while (std::getline(cdf, line)) {
        auto c1 = line.find(','), c2 = line.rfind(',');
        std::string power = line.substr(0, c1);
        double v = std::stod(line.substr(c2 + 1));
        auto it = last.find(power);
        if (it != last.end()) CHECK(v >= it->second);
        last[power] = v;
    }
    REQUIRE(last.size() == 2);
    for (const auto& [p, v] : last) CHECK(v == doctest::Approx(1.0));

    fs::remove_all(base);
}

TEST_CASE("run_scenario writes the three csvs plus the event log") {
    namespace fs = std::filesystem;
    ScenarioConfig sc = small_scenario();
    fs::path out = fs::temp_directory_path() / "navi_run_test";
    fs::remove_all(out);
    REQUIRE(run_scenario(sc, out.string()) == 0);
    for (const char* f :
         {"metrics_requests.csv", "metrics_aggregate.csv", "degree_cdf.csv", "events.log"})
        CHECK(fs::exists(out / f));
    // the event log round-trips through the parser
    std::ifstream in(out / "events.log");
    DeliveryLog log = parse_event_log(in);
    CHECK(log.requests.size() == 10);
    CHECK(!log.transmissions.empty());
    fs::remove_all(out);
}

TEST_CASE("sweep isolates and reports per-run failures") {
    ScenarioConfig sc = small_scenario();
    SweepOptions opts;
    opts.k_values = {1};
    opts.tx_powers_dbm = {23.0, 99.0};  // 99 dBm violates the radio bounds
    opts.strategies = {Strategy::Navi};
    namespace fs = std::filesystem;
    fs::path out = fs::temp_directory_path() / "navi_sweep_fail";
    fs::remove_all(out);
    CHECK(run_sweep(sc, opts, out.string()) == 1);
    // the healthy run still produced rows
    auto rows = parse_requests_csv((out / "metrics_requests.csv").string());
    CHECK(rows.size() == 10);
    fs::remove_all(out);
}
