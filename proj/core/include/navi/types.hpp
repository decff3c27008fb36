#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace navi {

using VehicleId = int;
using RequestId = int;
using ZoneId = int;

/// Planar position in meters, east (x) / north (y), relative to the
/// scenario bounding-box origin.
struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Position a, Position b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool operator==(Position a, Position b) { return a.x == b.x && a.y == b.y; }

/// Axis-aligned rectangle, min <= max on both axes.
struct Rect {
    Position min;
    Position max;

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double area_m2() const { return width() * height(); }
    bool contains(Position p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    void validate() const {
        if (!(min.x <= max.x) || !(min.y <= max.y))
            throw std::invalid_argument("Rect: min must not exceed max");
    }
};

enum class Capability : unsigned { ShortRange = 1u, Lte = 2u };

/// Which radio technologies a vehicle carries.
struct CapabilitySet {
    unsigned bits = 0;

    static CapabilitySet both() { return {3u}; }
    static CapabilitySet lte_only() { return {2u}; }
    static CapabilitySet short_range_only() { return {1u}; }
    static CapabilitySet none() { return {0u}; }

    bool has(Capability c) const { return (bits & static_cast<unsigned>(c)) != 0; }
    bool short_range() const { return has(Capability::ShortRange); }
    bool lte() const { return has(Capability::Lte); }
};

inline bool operator==(CapabilitySet a, CapabilitySet b) { return a.bits == b.bits; }

enum class Technology { ShortRange, Lte };

inline const char* to_string(Technology t) {
    return t == Technology::ShortRange ? "sr" : "lte";
}

enum class Strategy { Navi, AllLte };

inline const char* to_string(Strategy s) {
    return s == Strategy::Navi ? "navi" : "all_lte";
}

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

}  // namespace navi
