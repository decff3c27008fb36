#include "navi/geoserver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace navi {

ZoneGrid::ZoneGrid(Rect a, double cell_m) : area(a), cell(cell_m) {
    area.validate();
    if (cell <= 0.0) throw std::invalid_argument("zone cell must be positive");
    n_cols = std::max(1, static_cast<int>(std::ceil(area.width() / cell)));
    n_rows = std::max(1, static_cast<int>(std::ceil(area.height() / cell)));
}

ZoneId ZoneGrid::zone_of(Position p) const {
    int col = static_cast<int>(std::floor((p.x - area.min.x) / cell));
    int row = static_cast<int>(std::floor((p.y - area.min.y) / cell));
    col = std::clamp(col, 0, n_cols - 1);
    row = std::clamp(row, 0, n_rows - 1);
    return row * n_cols + col;
}

void WorldView::ingest(const VehicleSnapshot& snap) {
    reports_[snap.owner] = snap;
    for (const NeighborObservation& nb : snap.neighbors) {
        Sighting& s = sightings_[nb.id];
        if (snap.time >= s.time) s = Sighting{nb.position, nb.capabilities, snap.time};
    }
}

bool WorldView::has_fresh_report(VehicleId v, double now) const {
    return fresh_report(v, now) != nullptr;
}

const VehicleSnapshot* WorldView::fresh_report(VehicleId v, double now) const {
    auto it = reports_.find(v);
    if (it == reports_.end()) return nullptr;
    if (now - it->second.time > staleness_) return nullptr;
    return &it->second;
}

std::optional<Position> WorldView::known_position(VehicleId v, double now) const {
    if (const VehicleSnapshot* r = fresh_report(v, now)) return r->position;
    auto it = sightings_.find(v);
    if (it != sightings_.end() && now - it->second.time <= staleness_)
        return it->second.position;
    return std::nullopt;
}

std::optional<CapabilitySet> WorldView::known_capabilities(VehicleId v, double now) const {
    if (const VehicleSnapshot* r = fresh_report(v, now)) return r->capabilities;
    auto it = sightings_.find(v);
    if (it != sightings_.end() && now - it->second.time <= staleness_)
        return it->second.capabilities;
    return std::nullopt;
}

std::vector<VehicleId> WorldView::known_vehicles(double now) const {
    std::set<VehicleId> ids;
    for (const auto& [v, r] : reports_)
        if (now - r.time <= staleness_) ids.insert(v);
    for (const auto& [v, s] : sightings_)
        if (now - s.time <= staleness_) ids.insert(v);
    return {ids.begin(), ids.end()};
}

std::vector<VehicleId> WorldView::reporting_vehicles(double now) const {
    std::vector<VehicleId> ids;
    for (const auto& [v, r] : reports_)
        if (now - r.time <= staleness_) ids.push_back(v);
    return ids;
}

CoverageSets coverage_sets(const WorldView& view, const ZoneGrid& grid, int hop_limit,
                           double now, const std::vector<VehicleId>& for_vehicles) {
    if (hop_limit < 0) throw std::invalid_argument("hop_limit must be >= 0");
    CoverageSets out;
    for (VehicleId start : for_vehicles) {
        ZoneSet zones;
        auto own = view.known_position(start, now);
        if (own) zones.insert(grid.zone_of(*own));
        // BFS over the directed reported-neighbor graph, depth-limited.
        std::map<VehicleId, int> depth{{start, 0}};
        std::deque<VehicleId> frontier{start};
        while (!frontier.empty()) {
            VehicleId v = frontier.front();
            frontier.pop_front();
            int d = depth[v];
            if (d == hop_limit) continue;
            const VehicleSnapshot* rep = view.fresh_report(v, now);
            if (!rep) continue;  // sightings carry no outgoing edges
            for (const NeighborObservation& nb : rep->neighbors) {
                if (depth.count(nb.id)) continue;
                depth[nb.id] = d + 1;
                if (auto p = view.known_position(nb.id, now))
                    zones.insert(grid.zone_of(*p));
                frontier.push_back(nb.id);
            }
        }
        out[start] = std::move(zones);
    }
    return out;
}

CoverageSets coverage_sets(const WorldView& view, const ZoneGrid& grid, int hop_limit,
                           double now) {
    return coverage_sets(view, grid, hop_limit, now, view.reporting_vehicles(now));
}

int zone_index(VehicleId v, const CoverageSets& cov) {
    auto it = cov.find(v);
    if (it == cov.end()) throw std::out_of_range("no coverage set for vehicle");
    return static_cast<int>(it->second.size());
}

int dissimilarity(VehicleId v, const ZoneSet& selected_zones, const CoverageSets& cov) {
    auto it = cov.find(v);
    if (it == cov.end()) throw std::out_of_range("no coverage set for vehicle");
    int n = 0;
    for (ZoneId z : it->second)
        if (!selected_zones.count(z)) ++n;
    return n;
}

ZoneSet occupied_zones(const WorldView& view, const ZoneGrid& grid, double now) {
    ZoneSet zones;
    for (VehicleId v : view.known_vehicles(now))
        if (auto p = view.known_position(v, now)) zones.insert(grid.zone_of(*p));
    return zones;
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::CoverageComplete: return "coverage_complete";
        case StopReason::KReached: return "k_reached";
        case StopReason::ZeroGain: return "zero_gain";
        case StopReason::ValidityExpired: return "validity_expired";
    }
    return "?";
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "coverage_complete") return StopReason::CoverageComplete;
    if (s == "k_reached") return StopReason::KReached;
    if (s == "zero_gain") return StopReason::ZeroGain;
    if (s == "validity_expired") return StopReason::ValidityExpired;
    throw std::invalid_argument("unknown stop reason: " + s);
}

SelectionResult greedy_max_coverage(const CoverageSets& candidates, const ZoneSet& universe,
                                    int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    SelectionResult res;
    res.stop_reason = StopReason::ZeroGain;
    if (candidates.empty()) return res;  // no eligible candidates
    std::set<VehicleId> picked;
    auto covers_universe = [&res, &universe] {
        return std::includes(res.covered.begin(), res.covered.end(), universe.begin(),
                             universe.end());
    };
    while (true) {
        if (covers_universe()) {
            res.stop_reason = StopReason::CoverageComplete;
            break;
        }
        if (static_cast<int>(res.selected.size()) >= k) {
            res.stop_reason = StopReason::KReached;
            break;
        }
        VehicleId best = -1;
        int best_gain = 0;
        for (const auto& [v, zones] : candidates) {
            if (picked.count(v)) continue;
            int gain = dissimilarity(v, res.covered, candidates);
            if (gain > best_gain) {  // strict: ties keep the smaller id
                best_gain = gain;
                best = v;
            }
        }
        if (best_gain == 0) {
            res.stop_reason = StopReason::ZeroGain;
            break;
        }
        if (!res.gains.empty() && best_gain > res.gains.back())
            throw std::logic_error("greedy gains must be non-increasing");
        picked.insert(best);
        res.selected.push_back(best);
        res.gains.push_back(best_gain);
        const ZoneSet& zs = candidates.at(best);
        res.covered.insert(zs.begin(), zs.end());
    }
    return res;
}

SelectionResult select_virtual_infrastructure(const WorldView& view, const ZoneGrid& grid,
                                              const DisseminationRequest& req, double now,
                                              const SelectionLatencies& latencies,
                                              const CandidateFilter& extra_filter) {
    req.validate();
    // Information depreciation: if the payload cannot reach a vehicle one
    // hop past a VI before the validity expires, the request fails.
    if (req.validity_s < latencies.lte_down_s + latencies.short_range_s) {
        SelectionResult res;
        res.stop_reason = StopReason::ValidityExpired;
        return res;
    }
    std::vector<VehicleId> candidates;
    for (VehicleId v : view.reporting_vehicles(now)) {
        const VehicleSnapshot* rep = view.fresh_report(v, now);
        if (!rep->capabilities.short_range() || !rep->capabilities.lte()) continue;
        if (!req.area.contains(rep->position)) continue;
        if (extra_filter && !extra_filter(v, *rep)) continue;
        candidates.push_back(v);
    }
    ZoneSet universe = occupied_zones(view, grid, now);
    CoverageSets cov = coverage_sets(view, grid, req.hop_limit, now, candidates);
    return greedy_max_coverage(cov, universe, req.k);
}

}  // namespace navi
