#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "navi/geoserver.hpp"
#include "navi/rng.hpp"

using namespace navi;

namespace {

VehicleSnapshot snap(VehicleId owner, Position pos, double t,
                     std::vector<NeighborObservation> nbs = {},
                     CapabilitySet caps = CapabilitySet::both()) {
    VehicleSnapshot s;
    s.owner = owner;
    s.position = pos;
    s.capabilities = caps;
    s.time = t;
    s.neighbors = std::move(nbs);
    return s;
}

NeighborObservation nb(VehicleId id, Position pos,
                       CapabilitySet caps = CapabilitySet::both()) {
    return NeighborObservation{id, pos, caps};
}

DisseminationRequest make_req(Rect area, int k, int hop_limit = 1) {
    DisseminationRequest r;
    r.area = area;
    r.k = k;
    r.hop_limit = hop_limit;
    r.validity_s = 1.0;
    return r;
}

}  // namespace

TEST_CASE("zone grid shape and indexing") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    CHECK(grid.n_cols == 12);
    CHECK(grid.n_rows == 14);
    CHECK(grid.zone_count() == 168);
    CHECK(grid.zone_of({0, 0}) == 0);          // area.min
    CHECK(grid.zone_of({299, 0}) == 5);        // floor(299/50) = 5
    CHECK(grid.zone_of({50, 0}) == 1);         // interior boundary -> higher cell
    CHECK(grid.zone_of({0, 50}) == 12);        // row 1
    CHECK(grid.zone_of({600, 700}) == 167);    // max corner clamps into last cell
    CHECK(grid.zone_of({-40, 9999}) == 156);   // clamped to col 0, row 13
    CHECK_FALSE(grid.contains({-40, 0}));
}

TEST_CASE("zone grid rejects bad cells and handles degenerate areas") {
    CHECK_THROWS_AS(ZoneGrid({{0, 0}, {10, 10}}, 0.0), std::invalid_argument);
    ZoneGrid degenerate({{5, 5}, {5, 5}}, 50.0);
    CHECK(degenerate.zone_count() == 1);
    CHECK(degenerate.zone_of({5, 5}) == 0);
}

TEST_CASE("world view staleness excludes old snapshots") {
    WorldView view(5.0);
    view.ingest(snap(1, {10, 10}, 0.0));
    CHECK(view.has_fresh_report(1, 4.9));
    CHECK(view.has_fresh_report(1, 5.0));
    CHECK_FALSE(view.has_fresh_report(1, 5.1));
    view.ingest(snap(1, {12, 10}, 6.0));
    CHECK(view.known_position(1, 6.5)->x == 12.0);
}

TEST_CASE("coverage sets: isolated vehicle covers its own zone only") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    view.ingest(snap(3, {10, 10}, 1.0));
    auto cov = coverage_sets(view, grid, 1, 1.0);
    CHECK(cov.at(3) == ZoneSet{0});
    CHECK(zone_index(3, cov) == 1);
}

TEST_CASE("coverage sets: neighbors in zones {2,7} with self in zone 2") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    // zone 2 covers x in [100,150); zone 7 covers x in [350,400) at row 0
    view.ingest(snap(1, {110, 10}, 1.0, {nb(2, {120, 12}), nb(3, {360, 10})}));
    auto cov = coverage_sets(view, grid, 1, 1.0);
    CHECK(cov.at(1) == ZoneSet{2, 7});
    CHECK(zone_index(1, cov) == 2);
}

TEST_CASE("coverage sets: hop-limited BFS over reported edges") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    // a(zone 0) -> b(zone 3) -> c(zone 6); only owners report edges
    view.ingest(snap(1, {10, 10}, 1.0, {nb(2, {160, 10})}));
    view.ingest(snap(2, {160, 10}, 1.0, {nb(1, {10, 10}), nb(3, {310, 10})}));
    view.ingest(snap(3, {310, 10}, 1.0, {nb(2, {160, 10})}));
    auto hop0 = coverage_sets(view, grid, 0, 1.0);
    CHECK(hop0.at(1) == ZoneSet{0});
    auto hop1 = coverage_sets(view, grid, 1, 1.0);
    CHECK(hop1.at(1) == ZoneSet{0, 3});
    auto hop2 = coverage_sets(view, grid, 2, 1.0);
    CHECK(hop2.at(1) == ZoneSet{0, 3, 6});
    // monotone in hop count
    CHECK(std::includes(hop2.at(1).begin(), hop2.at(1).end(), hop1.at(1).begin(),
                        hop1.at(1).end()));
}

TEST_CASE("zone index equals dissimilarity against the empty set") {
    CoverageSets cov{{1, {2, 7}}, {2, {1}}};
    CHECK(zone_index(1, cov) == 2);
    CHECK(dissimilarity(1, {}, cov) == zone_index(1, cov));
    CHECK_THROWS_AS(zone_index(9, cov), std::out_of_range);
    CHECK_THROWS_AS(dissimilarity(9, {}, cov), std::out_of_range);
}

TEST_CASE("dissimilarity is the non-overlapping zone count") {
    CoverageSets cov{{1, {1, 2, 3}}};
    CHECK(dissimilarity(1, {2}, cov) == 2);
    CHECK(dissimilarity(1, {1, 2, 3}, cov) == 0);
    CHECK(dissimilarity(1, {1, 2, 3, 9}, cov) == 0);  // superset
    CHECK(dissimilarity(1, {5}, cov) == 3);
    CHECK(dissimilarity(1, {5}, cov) <= zone_index(1, cov));
}

TEST_CASE("greedy walks the documented A/B/C example") {
    CoverageSets sets{{1, {1, 2, 3}}, {2, {3, 4}}, {3, {2, 3}}};
    ZoneSet universe{1, 2, 3, 4};
    auto res = greedy_max_coverage(sets, universe, 3);
    CHECK(res.selected == std::vector<VehicleId>{1, 2});
    CHECK(res.gains == std::vector<int>{3, 1});
    CHECK(res.covered == ZoneSet{1, 2, 3, 4});
    CHECK(res.stop_reason == StopReason::CoverageComplete);
}

TEST_CASE("greedy ties break toward the smaller vehicle id") {
    CoverageSets sets{{4, {1, 2}}, {2, {1, 3}}, {9, {1, 4}}};
    auto res = greedy_max_coverage(sets, {1, 2, 3, 4}, 1);
    CHECK(res.selected.front() == 2);
    CHECK(res.stop_reason == StopReason::KReached);
}

TEST_CASE("greedy stop reasons: zero gain and k reached") {
    CoverageSets sets{{1, {1}}, {2, {1}}};
    auto res = greedy_max_coverage(sets, {1, 5}, 2);
    CHECK(res.selected == std::vector<VehicleId>{1});
    CHECK(res.stop_reason == StopReason::ZeroGain);  // zone 5 unreachable

    CoverageSets disjoint{{1, {1}}, {2, {2}}, {3, {3}}};
    auto res2 = greedy_max_coverage(disjoint, {1, 2, 3}, 2);
    CHECK(res2.selected.size() == 2);
    CHECK(res2.stop_reason == StopReason::KReached);

    auto res3 = greedy_max_coverage({}, {1}, 2);
    CHECK(res3.selected.empty());
    CHECK(res3.stop_reason == StopReason::ZeroGain);
}

TEST_CASE("greedy gains are positive, non-increasing and sum to the cover") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        CoverageSets sets;
        ZoneSet universe;
        int n = rng.uniform_int(1, 10);
        for (int v = 0; v < n; ++v) {
            ZoneSet zs;
            int m = rng.uniform_int(1, 6);
            for (int i = 0; i < m; ++i) zs.insert(rng.uniform_int(0, 14));
            universe.insert(zs.begin(), zs.end());
            sets[v] = std::move(zs);
        }
        int k = rng.uniform_int(1, n);
        auto res = greedy_max_coverage(sets, universe, k);
        int sum = 0;
        for (std::size_t i = 0; i < res.gains.size(); ++i) {
            CHECK(res.gains[i] > 0);
            if (i > 0) CHECK(res.gains[i] <= res.gains[i - 1]);
            sum += res.gains[i];
        }
        CHECK(sum == static_cast<int>(res.covered.size()));
        CHECK(static_cast<int>(res.selected.size()) <= k);
        // covered equals the union over the selected sets
        ZoneSet expect;
        for (VehicleId v : res.selected)
            expect.insert(sets[v].begin(), sets[v].end());
        CHECK(res.covered == expect);
    }
}

TEST_CASE("selection with budget k is a prefix of budget k+1") {
    Rng rng(515);
    for (int trial = 0; trial < 30; ++trial) {
        CoverageSets sets;
        ZoneSet universe;
        int n = rng.uniform_int(2, 10);
        for (int v = 0; v < n; ++v) {
            ZoneSet zs;
            int m = rng.uniform_int(1, 5);
            for (int i = 0; i < m; ++i) zs.insert(rng.uniform_int(0, 12));
            universe.insert(zs.begin(), zs.end());
            sets[v] = std::move(zs);
        }
        for (int k = 1; k < n; ++k) {
            auto a = greedy_max_coverage(sets, universe, k);
            auto b = greedy_max_coverage(sets, universe, k + 1);
            REQUIRE(a.selected.size() <= b.selected.size());
            for (std::size_t i = 0; i < a.selected.size(); ++i)
                CHECK(a.selected[i] == b.selected[i]);
        }
    }
}

TEST_CASE("greedy achieves at least (1 - 1/e) of the exhaustive optimum") {
    Rng rng(909);
    for (int trial = 0; trial < 40; ++trial) {
        int n = rng.uniform_int(1, 9);
        int zones = rng.uniform_int(1, 16);
        CoverageSets sets;
        ZoneSet universe;
        for (int v = 0; v < n; ++v) {
            ZoneSet zs;
            int m = rng.uniform_int(1, std::min(zones, 6));
            for (int i = 0; i < m; ++i) zs.insert(rng.uniform_int(0, zones - 1));
            universe.insert(zs.begin(), zs.end());
            sets[v] = std::move(zs);
        }
        int k = rng.uniform_int(1, 3);
        auto res = greedy_max_coverage(sets, universe, k);
        // brute force over all subsets of size <= k
        std::size_t best = 0;
        std::vector<VehicleId> ids;
        for (const auto& [v, _] : sets) ids.push_back(v);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) > k) continue;
            ZoneSet u;
            for (int b = 0; b < n; ++b)
                if (mask & (1u << b)) u.insert(sets[ids[b]].begin(), sets[ids[b]].end());
            best = std::max(best, u.size());
        }
        CHECK(static_cast<double>(res.covered.size()) >=
              (1.0 - 1.0 / 2.718281828459045) * static_cast<double>(best));
    }
}

TEST_CASE("occupied zones collect every known vehicle") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    view.ingest(snap(1, {10, 10}, 1.0, {nb(5, {560, 10})}));  // 5 known via sighting
    auto zones = occupied_zones(view, grid, 1.0);
    CHECK(zones == ZoneSet{0, 11});
}

TEST_CASE("virtual infrastructure selection filters candidates") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    Rect area{{0, 0}, {600, 700}};
    WorldView view(5.0);
    view.ingest(snap(1, {10, 10}, 10.0));
    view.ingest(snap(2, {160, 10}, 10.0, {}, CapabilitySet::lte_only()));   // not eligible
    view.ingest(snap(3, {310, 10}, 2.0));                                    // stale at t=10
    auto res = select_virtual_infrastructure(view, grid, make_req(area, 5), 10.0);
    // only vehicle 1 is a candidate; zones of 2 and 3 stay uncovered
    CHECK(res.selected == std::vector<VehicleId>{1});
    CHECK(res.stop_reason == StopReason::ZeroGain);

    // single eligible vehicle, nothing else known anywhere
    WorldView lone(5.0);
    lone.ingest(snap(9, {10, 10}, 10.0));
    auto single = select_virtual_infrastructure(lone, grid, make_req(area, 3), 10.0);
    CHECK(single.selected == std::vector<VehicleId>{9});
    CHECK(single.stop_reason == StopReason::CoverageComplete);
}

TEST_CASE("selection honours the request area") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    view.ingest(snap(1, {10, 10}, 1.0));
    view.ingest(snap(2, {400, 400}, 1.0));
    Rect west{{0, 0}, {100, 700}};
    auto res = select_virtual_infrastructure(view, grid, make_req(west, 5), 1.0);
    CHECK(res.selected == std::vector<VehicleId>{1});  // 2 is outside the area
}

TEST_CASE("too-small validity expires the request before selection") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    view.ingest(snap(1, {10, 10}, 1.0));
    auto req = make_req({{0, 0}, {600, 700}}, 3);
    req.validity_s = 0.010;  // below 50 ms LTE + 5 ms hop
    auto res = select_virtual_infrastructure(view, grid, req, 1.0);
    CHECK(res.selected.empty());
    CHECK(res.stop_reason == StopReason::ValidityExpired);
}

TEST_CASE("no eligible candidates yields an empty zero-gain selection") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    auto res = select_virtual_infrastructure(view, grid, make_req({{0, 0}, {600, 700}}, 3),
                                             1.0);
    CHECK(res.selected.empty());
    CHECK(res.stop_reason == StopReason::ZeroGain);
}

TEST_CASE("constraint hook drops candidates") {
    ZoneGrid grid({{0, 0}, {600, 700}}, 50.0);
    WorldView view(5.0);
    view.ingest(snap(1, {10, 10}, 1.0));
    view.ingest(snap(2, {400, 400}, 1.0));
    auto req = make_req({{0, 0}, {600, 700}}, 5);
    auto res = select_virtual_infrastructure(
        view, grid, req, 1.0, {},
        [](VehicleId v, const VehicleSnapshot&) { return v != 1; });
    CHECK(std::find(res.selected.begin(), res.selected.end(), 1) == res.selected.end());
    CHECK(std::find(res.selected.begin(), res.selected.end(), 2) != res.selected.end());
}
