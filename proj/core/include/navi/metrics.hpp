#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "navi/event_log.hpp"
#include "navi/trace.hpp"
#include "navi/types.hpp"

namespace navi {

/// Per-vehicle first-reception delay statistics, milliseconds.
struct DelayStats {
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p95_ms = 0.0;
    double max_ms = 0.0;
    int n = 0;
};

struct OverheadBytes {
    long lte = 0;
    long short_range = 0;
    long total() const { return lte + short_range; }
};

/// Ratio of receiving vehicles to the in-area population at issue time;
/// absent when the population is empty.
std::optional<double> covered_area_pct(const DeliveryLog& log, RequestId request_id,
                                       const std::vector<VehicleId>& population);

int vi_usage(const SelectionRecord& selection);

/// Bytes of the dissemination process itself (request, vi_notify,
/// local_broadcast, lte_unicast) attributed to one request.
OverheadBytes dissemination_overhead(const DeliveryLog& log, RequestId request_id);

/// Awareness-plane traffic (CAM beacons + NT uploads), reported apart.
OverheadBytes background_overhead(const DeliveryLog& log);

std::optional<DelayStats> delay_stats(const DeliveryLog& log, RequestId request_id,
                                      double issue_time);

struct RequestMetrics {
    std::string config_id;
    RequestId request_id = 0;
    Strategy strategy = Strategy::Navi;
    int k = 1;
    double tx_power_dbm = 0.0;
    std::optional<double> covered_pct;
    int vi_count = 0;
    long bytes_lte = 0;
    long bytes_sr = 0;
    std::optional<double> delay_mean_ms;
    std::optional<double> delay_p95_ms;
};

/// Join request/selection/reception records into one row per request.
std::vector<RequestMetrics> per_request_metrics(const DeliveryLog& log,
                                                const std::string& config_id, int k,
                                                double tx_power_dbm);

struct ConfidenceInterval {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
    int n = 0;
};

/// Student-t 95 % interval around the mean (n == 1 collapses to the mean).
ConfidenceInterval mean_ci95(const std::vector<double>& samples);
double t_quantile_975(int df);

struct AggregateRow {
    std::string config_id;
    std::string metric;
    double mean = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    int n = 0;
};

/// Mean + CI of each metric across requests, grouped by config_id (rows
/// follow first-seen config order). Includes the explicitly labeled
/// overhead_ratio_navi_over_all_lte for navi configs whose all_lte
/// counterpart (same k, tx power) is present.
std::vector<AggregateRow> aggregate_metrics(const std::vector<RequestMetrics>& rows);

// -- neighbor-degree CDF ----------------------------------------------------

/// Node degrees sampled from ground-truth connectivity every dt in
/// [t0, t1) over all vehicles.
std::vector<int> degree_samples(const MobilityTrace& trace, double range, double t0,
                                double t1, double dt);

double median_degree(std::vector<int> samples);

struct CdfPoint {
    int degree = 0;
    double cdf = 0.0;
};

std::vector<CdfPoint> degree_cdf(std::vector<int> samples);

// -- CSV emission -------------------------------------------------------------

void write_requests_csv(const std::string& path, const std::vector<RequestMetrics>& rows);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);
void write_degree_cdf_csv(const std::string& path,
                          const std::vector<std::pair<double, std::vector<CdfPoint>>>& by_power);

std::vector<RequestMetrics> parse_requests_csv(const std::string& path);
std::vector<AggregateRow> parse_aggregate_csv(const std::string& path);

}  // namespace navi
