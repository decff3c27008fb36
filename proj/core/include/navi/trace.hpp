#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "navi/types.hpp"

namespace navi {

/// Parse failure with the 1-based line number of the offending statement.
class TraceParseError : public std::runtime_error {
  public:
    TraceParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

struct TraceLimits {
    double max_speed_mps = 70.0 / 3.6;  // plausibility bound, scenario max is 50 km/h
};

/// Piecewise-linear vehicle trajectories over simulated time. Vehicles
/// move along constant-speed segments and pause at each destination
/// until the next segment starts; immutable once built.
class MobilityTrace {
  public:
    struct Segment {
        double start_time = 0.0;
        Position from;
        Position to;
        double speed = 0.0;    // m/s
        double arrival = 0.0;  // start_time + distance/speed, inf if speed == 0
    };

    // -- construction ------------------------------------------------------
    void add_vehicle(VehicleId v, Position initial, double appear_time = 0.0);
    /// Opens a segment from the vehicle's position at start_time toward
    /// dest. Segments must be added in chronological order per vehicle.
    void add_segment(VehicleId v, double start_time, Position dest, double speed);
    void set_duration(double d) { duration_ = d; }

    // -- queries -----------------------------------------------------------
    bool has_vehicle(VehicleId v) const { return tracks_.count(v) != 0; }
    std::vector<VehicleId> vehicles() const;
    std::size_t vehicle_count() const { return tracks_.size(); }

    /// Position by linear interpolation along the active segment, clamped
    /// at the destination after arrival. absent before the vehicle's first
    /// appearance; throws on unknown id.
    std::optional<Position> position_at(VehicleId v, double t) const;

    /// Velocity (vx, vy) on the active segment, (0,0) while paused/arrived.
    std::optional<std::pair<double, double>> velocity_at(VehicleId v, double t) const;

    double appear_time(VehicleId v) const;

    /// Last movement time seen in the trace (max segment arrival); a
    /// stationary-only trace has duration 0. Positions stay defined for
    /// any later t (vehicles pause at their final destination).
    double duration() const { return duration_; }

    /// Bounding box over all waypoints; positions never leave it.
    Rect bounds() const;

    std::string to_ns2() const;

    const std::vector<Segment>& segments(VehicleId v) const;

  private:
    struct Track {
        double appear_time = 0.0;
        Position initial;
        std::vector<Segment> segments;
    };
    const Track& track(VehicleId v) const;

    std::map<VehicleId, Track> tracks_;
    double duration_ = 0.0;
};

/// Parse the NS-2 movement dialect emitted by SUMO's trace exporter:
/// `$node_(I) set X_ V`, `$node_(I) set Y_ V`, and
/// `$ns_ at T "$node_(I) setdest X Y S"`. Z_ settings and unrecognized
/// lines are ignored. Duplicate initial positions keep the last value and
/// append a note to `warnings` when given.
MobilityTrace parse_ns2_trace(std::string_view text, std::vector<std::string>* warnings = nullptr,
                              const TraceLimits& limits = {});

MobilityTrace load_ns2_trace_file(const std::string& path,
                                  std::vector<std::string>* warnings = nullptr,
                                  const TraceLimits& limits = {});

/// Random-waypoint trajectories inside `area`, fully determined by seed.
/// Defaults mirror the reference scenario: 45 vehicles, 180 s, a
/// 600 m x 730 m area (~0.44 km^2) and 10-50 km/h speeds.
MobilityTrace generate_synthetic_trace(std::uint64_t seed, int n = 45,
                                       Rect area = {{0.0, 0.0}, {600.0, 730.0}},
                                       double duration = 180.0,
                                       std::pair<double, double> speed_range_mps = {10.0 / 3.6,
                                                                                    50.0 / 3.6});

}  // namespace navi
