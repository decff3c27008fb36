#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "navi/config.hpp"
#include "navi/scenario.hpp"
#include "navi/trace.hpp"

namespace {

int sweep_thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NAVI_SIM_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) return std::min<int>(cap, static_cast<int>(hw));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric NAVI_SIM_THREADS='" << env << "'\n";
        }
    }
    return static_cast<int>(hw);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NAVI virtual-infrastructure dissemination simulator"};
    app.require_subcommand(1);

    // run ----------------------------------------------------------------
    std::string run_config;
    std::string run_out = ".";
    std::int64_t run_seed = -1;
    auto* run = app.add_subcommand("run", "Run one scenario and emit metrics CSVs");
    run->add_option("--config", run_config, "Scenario config file")->required();
    run->add_option("--seed", run_seed, "Override the scenario seed");
    run->add_option("--out", run_out, "Output directory");

    // sweep --------------------------------------------------------------
    std::string sweep_config;
    std::string sweep_out = ".";
    std::string sweep_k, sweep_tx, sweep_strategy;
    std::int64_t sweep_seed = -1;
    auto* sweep = app.add_subcommand("sweep", "Sweep k / tx power / strategy");
    sweep->add_option("--config", sweep_config, "Scenario config file")->required();
    sweep->add_option("--k", sweep_k, "k values, e.g. 1..20 or 1,5,10");
    sweep->add_option("--tx", sweep_tx, "tx powers in dBm, e.g. 16,21,23");
    sweep->add_option("--strategy", sweep_strategy, "strategies, e.g. navi,all_lte");
    sweep->add_option("--seed", sweep_seed, "Override the scenario seed");
    sweep->add_option("--out", sweep_out, "Output directory");

    // gen-trace ------------------------------------------------------------
    std::uint64_t gt_seed = 1;
    int gt_vehicles = 45;
    double gt_duration = 180.0;
    std::string gt_area = "600x730";
    std::string gt_out = "trace.tcl";
    double gt_speed_min = 10.0, gt_speed_max = 50.0;
    auto* gen = app.add_subcommand("gen-trace", "Generate a random-waypoint NS-2 trace");
    gen->add_option("--seed", gt_seed, "Trace seed");
    gen->add_option("--vehicles", gt_vehicles, "Number of vehicles");
    gen->add_option("--duration", gt_duration, "Duration in seconds");
    gen->add_option("--area", gt_area, "Area as WIDTHxHEIGHT meters");
    gen->add_option("--speed-min", gt_speed_min, "Min speed km/h");
    gen->add_option("--speed-max", gt_speed_max, "Max speed km/h");
    gen->add_option("--out", gt_out, "Output trace file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            navi::ScenarioConfig sc = navi::load_scenario_config(run_config);
            if (run_seed >= 0) sc.seed = static_cast<std::uint64_t>(run_seed);
            return navi::run_scenario(sc, run_out);
        }
        if (sweep->parsed()) {
            navi::ScenarioConfig sc = navi::load_scenario_config(sweep_config);
            if (sweep_seed >= 0) sc.seed = static_cast<std::uint64_t>(sweep_seed);
            navi::SweepOptions opts;
            if (!sweep_k.empty()) opts.k_values = navi::parse_int_list(sweep_k);
            if (!sweep_tx.empty()) opts.tx_powers_dbm = navi::parse_double_list(sweep_tx);
            if (!sweep_strategy.empty())
                opts.strategies = navi::parse_strategy_list(sweep_strategy);
            opts.threads = sweep_thread_cap();
            return navi::run_sweep(sc, opts, sweep_out);
        }
        if (gen->parsed()) {
            navi::Rect area = navi::parse_area(gt_area);
            navi::MobilityTrace trace = navi::generate_synthetic_trace(
                gt_seed, gt_vehicles, area, gt_duration,
                {navi::kmh_to_mps(gt_speed_min), navi::kmh_to_mps(gt_speed_max)});
            std::ofstream out(gt_out, std::ios::binary | std::ios::trunc);
            if (!out) {
                std::cerr << "error: cannot write " << gt_out << "\n";
                return 1;
            }
            out << trace.to_ns2();
            std::cout << "wrote " << gt_out << " (" << gt_vehicles << " vehicles, "
                      << gt_duration << " s)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
