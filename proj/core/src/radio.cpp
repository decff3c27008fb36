#include "navi/radio.hpp"

#include <cmath>

namespace navi {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void RadioConfig::validate() const {
    if (tx_power_dbm < 0.0 || tx_power_dbm > 33.0)
        throw std::invalid_argument("tx_power_dbm outside [0, 33]");
    if (frequency_hz <= 0.0) throw std::invalid_argument("frequency must be positive");
    if (model == RadioModel::FixedRange && fixed_range_m <= 0.0)
        throw std::invalid_argument("fixed range must be positive");
}

double range_from_power(const RadioConfig& cfg) {
    if (cfg.frequency_hz <= 0.0) throw std::invalid_argument("frequency must be positive");
    double lambda = kSpeedOfLight / cfg.frequency_hz;
    double budget_db = cfg.tx_power_dbm - cfg.rx_sensitivity_dbm;
    return lambda / (4.0 * kPi) * std::pow(10.0, budget_db / 20.0);
}

double resolve_range(const RadioConfig& cfg) {
    if (cfg.model == RadioModel::FixedRange) {
        if (cfg.fixed_range_m <= 0.0) throw std::invalid_argument("fixed range must be positive");
        return cfg.fixed_range_m;
    }
    return range_from_power(cfg);
}

bool link_exists(Position a, Position b, double range) {
    if (range <= 0.0) throw std::invalid_argument("range must be positive");
    return distance(a, b) <= range;
}

int ConnectivityGraph::degree(VehicleId v) const {
    int d = 0;
    for (const auto& [a, b] : edges)
        if (a == v || b == v) ++d;
    return d;
}

std::vector<int> ConnectivityGraph::degrees() const {
    std::map<VehicleId, int> by_node;
    for (VehicleId v : nodes) by_node[v] = 0;
    for (const auto& [a, b] : edges) {
        ++by_node[a];
        ++by_node[b];
    }
    std::vector<int> out;
    out.reserve(nodes.size());
    for (VehicleId v : nodes) out.push_back(by_node[v]);
    return out;
}

std::vector<VehicleId> ConnectivityGraph::neighbors(VehicleId v) const {
    std::vector<VehicleId> out;
    for (const auto& [a, b] : edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    return out;
}

ConnectivityGraph connectivity_snapshot(const std::map<VehicleId, Position>& positions,
                                        double range, double t) {
    ConnectivityGraph g;
    g.timestamp = t;
    for (const auto& [v, _] : positions) g.nodes.push_back(v);
    for (auto it = positions.begin(); it != positions.end(); ++it) {
        auto jt = it;
        for (++jt; jt != positions.end(); ++jt) {
            if (link_exists(it->second, jt->second, range))
                g.edges.insert({it->first, jt->first});
        }
    }
    return g;
}

}  // namespace navi
