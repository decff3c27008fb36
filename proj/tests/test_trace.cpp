#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "navi/rng.hpp"
#include "navi/trace.hpp"

using namespace navi;

TEST_CASE("stationary vehicle from initial X_/Y_ only") {
    auto trace = parse_ns2_trace("$node_(0) set X_ 10\n$node_(0) set Y_ 20\n");
    REQUIRE(trace.vehicle_count() == 1);
    CHECK(*trace.position_at(0, 0.0) == Position{10, 20});
    CHECK(*trace.position_at(0, 1e6) == Position{10, 20});
    CHECK(trace.duration() == 0.0);
}

TEST_CASE("constant-velocity kinematics along a setdest segment") {
    auto trace = parse_ns2_trace(
        "$node_(0) set X_ 0\n"
        "$node_(0) set Y_ 0\n"
        "$ns_ at 0.0 \"$node_(0) setdest 100 0 10\"\n");
    auto p = *trace.position_at(0, 5.0);
    CHECK(p.x == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(p.y == 0.0);
}

TEST_CASE("arrival time is distance over speed, then clamped at destination") {
    auto trace = parse_ns2_trace(
        "$node_(0) set X_ 0\n"
        "$node_(0) set Y_ 0\n"
        "$ns_ at 0.0 \"$node_(0) setdest 30 40 5\"\n");
    // distance 50 m at 5 m/s: arrival at t = 10 s
    CHECK(trace.segments(0).at(0).arrival == doctest::Approx(10.0));
    auto p = *trace.position_at(0, 12.0);
    CHECK(p.x == doctest::Approx(30.0));
    CHECK(p.y == doctest::Approx(40.0));
    auto mid = *trace.position_at(0, 5.0);
    CHECK(mid.x == doctest::Approx(15.0));
    CHECK(mid.y == doctest::Approx(20.0));
}

TEST_CASE("malformed numeric fields report the line number") {
    try {
        parse_ns2_trace("$node_(0) set X_ 1\n$node_(0) set Y_ bogus\n");
        FAIL("expected TraceParseError");
    } catch (const TraceParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("setdest before any initial position is an error") {
    CHECK_THROWS_AS(parse_ns2_trace("$ns_ at 0.0 \"$node_(3) setdest 1 2 3\"\n"),
                    TraceParseError);
    // Y_ missing counts too.
    CHECK_THROWS_AS(parse_ns2_trace("$node_(3) set X_ 5\n"
                                    "$ns_ at 0.0 \"$node_(3) setdest 1 2 3\"\n"),
                    TraceParseError);
}

TEST_CASE("duplicate initial position: last wins, warning recorded") {
    std::vector<std::string> warnings;
    auto trace = parse_ns2_trace(
        "$node_(0) set X_ 1\n$node_(0) set X_ 2\n$node_(0) set Y_ 3\n", &warnings);
    CHECK(trace.position_at(0, 0.0)->x == 2.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("Z_ settings and unrecognized lines are ignored") {
    auto trace = parse_ns2_trace(
        "# comment\n"
        "$node_(0) set X_ 1\n"
        "$node_(0) set Y_ 2\n"
        "$node_(0) set Z_ 9\n"
        "$ns_ at 10.0 \"$node_(0) start-whatever\"\n");
    CHECK(trace.vehicle_count() == 1);
}

TEST_CASE("implausible speeds are rejected with the configured bound") {
    std::string text =
        "$node_(0) set X_ 0\n$node_(0) set Y_ 0\n"
        "$ns_ at 0.0 \"$node_(0) setdest 100 0 25\"\n";  // 25 m/s = 90 km/h
    CHECK_THROWS_AS(parse_ns2_trace(text), TraceParseError);
    TraceLimits relaxed{30.0};
    CHECK_NOTHROW(parse_ns2_trace(text, nullptr, relaxed));
}

TEST_CASE("position_at: unknown vehicle throws, pre-appearance is absent") {
    MobilityTrace trace;
    trace.add_vehicle(7, {1, 1}, 5.0);
    CHECK_THROWS_AS(trace.position_at(3, 0.0), std::out_of_range);
    CHECK_FALSE(trace.position_at(7, 2.0).has_value());
    CHECK(trace.position_at(7, 5.0).has_value());
}

TEST_CASE("pause between segments holds the previous destination") {
    MobilityTrace trace;
    trace.add_vehicle(0, {0, 0});
    trace.add_segment(0, 0.0, {10, 0}, 5.0);   // arrives at t=2
    trace.add_segment(0, 10.0, {10, 20}, 5.0); // departs at t=10
    CHECK(trace.position_at(0, 6.0)->x == doctest::Approx(10.0));
    CHECK(trace.position_at(0, 6.0)->y == doctest::Approx(0.0));
    CHECK(trace.position_at(0, 12.0)->y == doctest::Approx(10.0));
}

TEST_CASE("synthetic traces are byte-identical for the same seed") {
    auto a = generate_synthetic_trace(42, 10, {{0, 0}, {300, 300}}, 60.0, {3, 10});
    auto b = generate_synthetic_trace(42, 10, {{0, 0}, {300, 300}}, 60.0, {3, 10});
    CHECK(a.to_ns2() == b.to_ns2());
    auto c = generate_synthetic_trace(43, 10, {{0, 0}, {300, 300}}, 60.0, {3, 10});
    CHECK(a.to_ns2() != c.to_ns2());
}

TEST_CASE("single synthetic vehicle never leaves the area") {
    Rect area{{0, 0}, {200, 150}};
    auto trace = generate_synthetic_trace(7, 1, area, 120.0, {3, 10});
    for (double t = 0.0; t <= 120.0; t += 0.5) {
        auto p = *trace.position_at(0, t);
        CHECK(area.contains(p));
    }
}

TEST_CASE("default synthetic density mirrors the reference scenario") {
    // 45 vehicles over 600 x 730 m: ~103 veh/km^2; with a 0.40 km^2 area the
    // density lands within 10 % of the 113 veh/km^2 target.
    double density_default = 45.0 / (600.0 * 730.0 / 1e6);
    CHECK(density_default == doctest::Approx(102.74).epsilon(1e-3));
    double density_040 = 45.0 / 0.40;
    CHECK(std::abs(density_040 - 113.0) <= 0.1 * 113.0);
}

TEST_CASE("distance traveled within a segment equals speed times elapsed") {
    auto trace = generate_synthetic_trace(11, 6, {{0, 0}, {500, 500}}, 90.0, {3, 12});
    for (VehicleId v : trace.vehicles()) {
        for (const auto& seg : trace.segments(v)) {
            if (!std::isfinite(seg.arrival)) continue;
            double t1 = seg.start_time + 0.25 * (seg.arrival - seg.start_time);
            double t2 = seg.start_time + 0.75 * (seg.arrival - seg.start_time);
            auto p1 = *trace.position_at(v, t1);
            auto p2 = *trace.position_at(v, t2);
            CHECK(distance(p1, p2) == doctest::Approx(seg.speed * (t2 - t1)).epsilon(1e-9));
        }
    }
}

TEST_CASE("ns2 round-trip preserves position answers at 0.1 s granularity") {
    auto trace = generate_synthetic_trace(5, 8, {{0, 0}, {400, 400}}, 60.0, {3, 12});
    auto reparsed = parse_ns2_trace(trace.to_ns2());
    REQUIRE(reparsed.vehicle_count() == trace.vehicle_count());
    for (VehicleId v : trace.vehicles()) {
        for (double t = 0.0; t < 60.0; t += 0.1) {
            auto a = *trace.position_at(v, t);
            auto b = *reparsed.position_at(v, t);
            CHECK(a.x == doctest::Approx(b.x).epsilon(1e-12));
            CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
        }
    }
}

TEST_CASE("positions stay inside the trace bounding box (plus 1 m)") {
    auto trace = generate_synthetic_trace(19, 10, {{50, 50}, {600, 700}}, 90.0, {3, 14});
    Rect box = trace.bounds();
    Rect grown{{box.min.x - 1.0, box.min.y - 1.0}, {box.max.x + 1.0, box.max.y + 1.0}};
    Rng rng(99);
    for (VehicleId v : trace.vehicles())
        for (int i = 0; i < 200; ++i)
            CHECK(grown.contains(*trace.position_at(v, rng.uniform(0.0, 90.0))));
}

TEST_CASE("a setdest mid-flight redirects from the interpolated position") {
    auto trace = parse_ns2_trace(
        "$node_(0) set X_ 0\n"
        "$node_(0) set Y_ 0\n"
        "$ns_ at 0.0 \"$node_(0) setdest 100 0 10\"\n"
        "$ns_ at 5.0 \"$node_(0) setdest 0 50 5\"\n");
    auto turn = *trace.position_at(0, 5.0);
    CHECK(turn.x == doctest::Approx(50.0));
    CHECK(turn.y == doctest::Approx(0.0));
    // 2 s at 5 m/s from (50,0) toward (0,50): unit direction (-1,1)/sqrt(2)
    auto p = *trace.position_at(0, 7.0);
    CHECK(p.x == doctest::Approx(50.0 - 10.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(p.y == doctest::Approx(10.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("the bundled reference trace parses and stays in bounds") {
    auto trace = load_ns2_trace_file(std::string(NAVI_DATA_DIR) + "/reference_trace.tcl");
    CHECK(trace.vehicle_count() == 45);
    CHECK(trace.duration() >= 180.0);
    Rect area{{0, 0}, {600, 730}};
    for (VehicleId v : trace.vehicles()) {
        CHECK(area.contains(*trace.position_at(v, 0.0)));
        CHECK(area.contains(*trace.position_at(v, 90.0)));
        CHECK(area.contains(*trace.position_at(v, 179.9)));
        for (const auto& seg : trace.segments(v))
            CHECK(seg.speed <= 50.0 / 3.6 + 1e-9);  // scenario speed cap
    }
}

TEST_CASE("velocity reflects segment heading and stops after arrival") {
    MobilityTrace trace;
    trace.add_vehicle(0, {0, 0});
    trace.add_segment(0, 0.0, {30, 40}, 5.0);
    auto vel = *trace.velocity_at(0, 1.0);
    CHECK(vel.first == doctest::Approx(3.0));
    CHECK(vel.second == doctest::Approx(4.0));
    auto stopped = *trace.velocity_at(0, 11.0);
    CHECK(stopped.first == 0.0);
    CHECK(stopped.second == 0.0);
}
