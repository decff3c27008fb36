#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "navi/types.hpp"

namespace navi {

enum class RadioModel { FixedRange, FriisThreshold };

/// Short-range (ITS-G5-like) radio parameters. The deterministic
/// threshold-range abstraction keeps the selection algorithm the variable
/// under test; there is no fading and no contention.
struct RadioConfig {
    double tx_power_dbm = 23.0;
    double rx_sensitivity_dbm = -85.0;
    double frequency_hz = 5.9e9;
    RadioModel model = RadioModel::FriisThreshold;
    double fixed_range_m = 0.0;  // used when model == FixedRange

    void validate() const;
};

/// Threshold range of the Friis free-space model: the distance at which
/// path loss equals the link budget, R = (lambda/4pi) * 10^((Ptx-Psens)/20).
double range_from_power(const RadioConfig& cfg);

/// Communication range under either model.
double resolve_range(const RadioConfig& cfg);

/// Closed-ball containment: distance == range counts as connected.
bool link_exists(Position a, Position b, double range);

/// Undirected unit-disk connectivity at one instant.
struct ConnectivityGraph {
    double timestamp = 0.0;
    std::vector<VehicleId> nodes;
    std::set<std::pair<VehicleId, VehicleId>> edges;  // ordered pairs, first < second

    bool adjacent(VehicleId a, VehicleId b) const {
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        return edges.count({a, b}) != 0;
    }
    int degree(VehicleId v) const;
    std::vector<int> degrees() const;  // aligned with nodes
    std::vector<VehicleId> neighbors(VehicleId v) const;
};

ConnectivityGraph connectivity_snapshot(const std::map<VehicleId, Position>& positions,
                                        double range, double t);

}  // namespace navi
