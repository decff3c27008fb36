#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "navi/request.hpp"
#include "navi/types.hpp"

namespace navi {

using ZoneSet = std::set<ZoneId>;

/// Uniform discretization of the dissemination area into square
/// sub-areas. Cells are half-open; points on an interior boundary belong
/// to the higher cell, points outside the area clamp to the boundary cell.
struct ZoneGrid {
    Rect area;
    double cell = 50.0;
    int n_cols = 1;
    int n_rows = 1;

    ZoneGrid() = default;
    ZoneGrid(Rect a, double cell_m);

    int zone_count() const { return n_cols * n_rows; }
    bool contains(Position p) const { return area.contains(p); }
    ZoneId zone_of(Position p) const;
};

/// One vehicle's uploaded neighbor-table snapshot as stored at the
/// geoserver: own position/capabilities plus the neighbors it heard,
/// with the positions and capabilities their last CAMs carried.
struct NeighborObservation {
    VehicleId id = 0;
    Position position;
    CapabilitySet capabilities;
};

struct VehicleSnapshot {
    VehicleId owner = 0;
    Position position;
    CapabilitySet capabilities;
    double time = 0.0;
    std::vector<NeighborObservation> neighbors;
};

/// The geoserver's bird-eye view: latest snapshot per reporting vehicle,
/// plus passive sightings of vehicles known only through neighbors'
/// tables. Entries older than the staleness bound are excluded.
class WorldView {
  public:
    explicit WorldView(double staleness_bound_s = 5.0) : staleness_(staleness_bound_s) {}

    void ingest(const VehicleSnapshot& snap);

    double staleness_bound() const { return staleness_; }

    bool has_fresh_report(VehicleId v, double now) const;
    const VehicleSnapshot* fresh_report(VehicleId v, double now) const;

    /// Freshest known position (own report preferred over sightings).
    std::optional<Position> known_position(VehicleId v, double now) const;
    std::optional<CapabilitySet> known_capabilities(VehicleId v, double now) const;

    /// Every vehicle with a fresh report or sighting, ascending id.
    std::vector<VehicleId> known_vehicles(double now) const;
    std::vector<VehicleId> reporting_vehicles(double now) const;

    std::size_t report_count() const { return reports_.size(); }

  private:
    struct Sighting {
        Position position;
        CapabilitySet capabilities;
        double time = 0.0;
    };
    double staleness_;
    std::map<VehicleId, VehicleSnapshot> reports_;
    std::map<VehicleId, Sighting> sightings_;
};

/// zones(v): zones holding v or any vehicle reachable from v within
/// hop_limit hops of the reported neighbor graph.
using CoverageSets = std::map<VehicleId, ZoneSet>;

CoverageSets coverage_sets(const WorldView& view, const ZoneGrid& grid, int hop_limit,
                           double now, const std::vector<VehicleId>& for_vehicles);
CoverageSets coverage_sets(const WorldView& view, const ZoneGrid& grid, int hop_limit,
                           double now);

int zone_index(VehicleId v, const CoverageSets& cov);
int dissimilarity(VehicleId v, const ZoneSet& selected_zones, const CoverageSets& cov);

/// Zones occupied by at least one known vehicle; the set-cover universe.
ZoneSet occupied_zones(const WorldView& view, const ZoneGrid& grid, double now);

enum class StopReason { CoverageComplete, KReached, ZeroGain, ValidityExpired };

const char* to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

struct SelectionResult {
    std::vector<VehicleId> selected;  // in pick order
    ZoneSet covered;
    StopReason stop_reason = StopReason::ZeroGain;
    std::vector<int> gains;  // strictly positive, non-increasing
};

/// Greedy maximum-coverage core: repeatedly pick the candidate with the
/// largest dissimilarity against the zones covered so far (ties to the
/// smaller id) until the universe is covered, the budget k is spent, or
/// no candidate adds a zone.
SelectionResult greedy_max_coverage(const CoverageSets& candidates, const ZoneSet& universe,
                                    int k);

/// Hook for the constraint filter (application requirements, network
/// load, ...); returns false to drop a candidate.
using CandidateFilter = std::function<bool(VehicleId, const VehicleSnapshot&)>;

struct SelectionLatencies {
    double lte_down_s = 0.050;
    double short_range_s = 0.005;
};

/// Candidate filtering plus the greedy election. Candidates must lie in
/// the request area, have a fresh snapshot and carry both technologies
/// (receive via LTE, rebroadcast locally). A validity below the minimum
/// delivery latency fails the request up front.
SelectionResult select_virtual_infrastructure(const WorldView& view, const ZoneGrid& grid,
                                              const DisseminationRequest& req, double now,
                                              const SelectionLatencies& latencies = {},
                                              const CandidateFilter& extra_filter = nullptr);

}  // namespace navi
