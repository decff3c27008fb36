#include "navi/scenario.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "navi/simcore.hpp"

namespace navi {

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<std::pair<double, std::vector<CdfPoint>>> degree_cdfs_for(
    const ScenarioConfig& sc, const MobilityTrace& trace, const std::vector<double>& powers) {
    std::vector<std::pair<double, std::vector<CdfPoint>>> out;
    for (double tx : powers) {
        SimConfig cfg = make_sim_config(sc, 1, tx, Strategy::Navi, sc.seed);
        double range = resolve_range(cfg.radio);
        auto samples = degree_samples(trace, range, 0.0, sc.duration_s, 1.0);
        out.emplace_back(tx, degree_cdf(std::move(samples)));
    }
    return out;
}

void write_event_log_file(const std::string& path, const DeliveryLog& log) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        write_event_log(out, log);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp);
}

}  // namespace

std::string make_config_id(Strategy strategy, int k, double tx_power_dbm) {
    std::ostringstream os;
    os << to_string(strategy) << "_k" << k << "_tx" << fmt_g(tx_power_dbm);
    return os.str();
}

RunArtifacts run_single(const ScenarioConfig& sc, const MobilityTrace& trace, int k,
                        double tx_power_dbm, Strategy strategy, std::uint64_t seed) {
    RunArtifacts art;
    art.config_id = make_config_id(strategy, k, tx_power_dbm);
    art.k = k;
    art.tx_power_dbm = tx_power_dbm;
    art.strategy = strategy;
    try {
        SimConfig cfg = make_sim_config(sc, k, tx_power_dbm, strategy, seed);
        Simulation sim(trace, cfg);
        sim.run();
        art.invariant_violations = sim.invariant_violations();
        art.request_rows = per_request_metrics(sim.log(), art.config_id, k, tx_power_dbm);
        art.log = sim.log();
    } catch (const std::exception& e) {
        art.error = e.what();
    }
    return art;
}

int run_scenario(const ScenarioConfig& sc, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> warnings;
    MobilityTrace trace = load_configured_trace(sc, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    if (trace.duration() < sc.duration_s)
        std::cerr << "warning: trace movement ends at " << trace.duration()
                  << " s, before the configured " << sc.duration_s
                  << " s; vehicles pause at their last destinations\n";

    RunArtifacts art = run_single(sc, trace, sc.k, sc.tx_power_dbm, sc.strategy, sc.seed);
    if (!art.error.empty()) {
        std::cerr << "error: run failed: " << art.error << "\n";
        return 1;
    }
    auto dir = std::filesystem::path(out_dir);
    write_requests_csv((dir / "metrics_requests.csv").string(), art.request_rows);
    write_aggregate_csv((dir / "metrics_aggregate.csv").string(),
                        aggregate_metrics(art.request_rows));
    write_degree_cdf_csv((dir / "degree_cdf.csv").string(),
                         degree_cdfs_for(sc, trace, {sc.tx_power_dbm}));
    write_event_log_file((dir / "events.log").string(), art.log);
    if (art.invariant_violations > 0) {
        std::cerr << "error: " << art.invariant_violations
                  << " invariant self-check violations\n";
        return 1;
    }
    return 0;
}

int run_sweep(const ScenarioConfig& sc, SweepOptions opts, const std::string& out_dir) {
    if (opts.k_values.empty()) opts.k_values = sc.sweep_k;
    if (opts.tx_powers_dbm.empty()) opts.tx_powers_dbm = sc.sweep_tx_dbm;
    if (opts.strategies.empty()) opts.strategies = sc.sweep_strategies;
    if (opts.threads < 1) opts.threads = 1;
    std::filesystem::create_directories(out_dir);

    std::vector<std::string> warnings;
    MobilityTrace trace = load_configured_trace(sc, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

    struct RunPoint {
        int k;
        double tx;
        Strategy strategy;
        std::uint64_t seed;
    };
    std::vector<RunPoint> specs;
    for (double tx : opts.tx_powers_dbm)
        for (int k : opts.k_values)
            for (Strategy st : opts.strategies)
                specs.push_back(RunPoint{k, tx, st,
                                     derive_seed(sc.seed, specs.size())});

    std::vector<RunArtifacts> results(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) break;
            const RunPoint& s = specs[i];
            results[i] = run_single(sc, trace, s.k, s.tx, s.strategy, s.seed);
        }
    };
    int n_threads = std::min<int>(opts.threads, static_cast<int>(specs.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Merge in run order so sweep outputs are byte-stable regardless of
    // thread scheduling.
    std::vector<RequestMetrics> all_rows;
    int failures = 0;
    for (const RunArtifacts& art : results) {
        if (!art.error.empty()) {
            std::cerr << "error: run " << art.config_id << " failed: " << art.error << "\n";
            ++failures;
            continue;
        }
        if (art.invariant_violations > 0) {
            std::cerr << "error: run " << art.config_id << ": " << art.invariant_violations
                      << " invariant self-check violations\n";
            ++failures;
        }
        all_rows.insert(all_rows.end(), art.request_rows.begin(), art.request_rows.end());
    }

    auto dir = std::filesystem::path(out_dir);
    write_requests_csv((dir / "metrics_requests.csv").string(), all_rows);
    write_aggregate_csv((dir / "metrics_aggregate.csv").string(), aggregate_metrics(all_rows));
    write_degree_cdf_csv((dir / "degree_cdf.csv").string(),
                         degree_cdfs_for(sc, trace, opts.tx_powers_dbm));
    return failures == 0 ? 0 : 1;
}

}  // namespace navi
