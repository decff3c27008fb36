#pragma once

#include <string>
#include <vector>

#include "navi/config.hpp"
#include "navi/metrics.hpp"

namespace navi {

/// Outcome of one (k, tx power, strategy) simulation run.
struct RunArtifacts {
    std::string config_id;
    int k = 1;
    double tx_power_dbm = 0.0;
    Strategy strategy = Strategy::Navi;
    std::vector<RequestMetrics> request_rows;
    DeliveryLog log;
    int invariant_violations = 0;
    std::string error;  // non-empty if the run failed

    bool ok() const { return error.empty() && invariant_violations == 0; }
};

std::string make_config_id(Strategy strategy, int k, double tx_power_dbm);

/// One deterministic simulation of the configured scenario at the given
/// sweep point (the trace is shared, immutable input).
RunArtifacts run_single(const ScenarioConfig& sc, const MobilityTrace& trace, int k,
                        double tx_power_dbm, Strategy strategy, std::uint64_t seed);

/// Single run per the config's own k/tx/strategy. Writes
/// metrics_requests.csv, metrics_aggregate.csv, degree_cdf.csv and
/// events.log into out_dir. Returns a process exit code (0 = run
/// completed and all invariant self-checks passed).
int run_scenario(const ScenarioConfig& sc, const std::string& out_dir);

struct SweepOptions {
    std::vector<int> k_values;
    std::vector<double> tx_powers_dbm;
    std::vector<Strategy> strategies;
    int threads = 1;  // capped by NAVI_SIM_THREADS in the CLI
};

/// Cartesian sweep over (tx, k, strategy); per-run failures are isolated
/// and reported while the sweep continues. Master seed splits per run
/// index. Returns 0 iff every run completed with clean self-checks.
int run_sweep(const ScenarioConfig& sc, SweepOptions opts, const std::string& out_dir);

}  // namespace navi
