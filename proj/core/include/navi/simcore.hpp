#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <variant>
#include <vector>

#include "navi/event_log.hpp"
#include "navi/geoserver.hpp"
#include "navi/radio.hpp"
#include "navi/request.hpp"
#include "navi/rng.hpp"
#include "navi/trace.hpp"
#include "navi/types.hpp"

namespace navi {

class SimError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Single-hop awareness beacon (simplified CAM record): position, speed
/// and heading at generation time, enriched with the sender's available
/// communication technologies.
struct Cam {
    VehicleId sender = 0;
    Position position;
    double speed_mps = 0.0;
    double heading_rad = 0.0;
    CapabilitySet capabilities;
    double gen_time = 0.0;
};

struct NeighborEntry {
    Cam last_cam;
    double last_heard = 0.0;
};

/// Per-vehicle table of recently heard neighbors. Entries expire after a
/// timeout; expiry is a lazy check on read plus the periodic sweep.
class NeighborTable {
  public:
    NeighborTable() = default;
    explicit NeighborTable(VehicleId owner) : owner_(owner) {}

    VehicleId owner() const { return owner_; }

    void upsert(const Cam& cam, double now);
    void sweep(double now, double timeout);

    bool contains(VehicleId v) const { return entries_.count(v) != 0; }
    std::size_t size() const { return entries_.size(); }
    const std::map<VehicleId, NeighborEntry>& entries() const { return entries_; }

    /// Entries satisfying now - last_heard <= timeout.
    std::vector<const NeighborEntry*> fresh_entries(double now, double timeout) const;

  private:
    VehicleId owner_ = 0;
    std::map<VehicleId, NeighborEntry> entries_;
};

struct VehicleAgent {
    VehicleId id = 0;
    CapabilitySet capabilities;
    NeighborTable neighbor_table;
    std::map<RequestId, double> first_reception;  // immutable once set
    std::set<RequestId> broadcasted;              // at most one local broadcast per request

    void process_cam(const Cam& cam, double now);
};

/// Per-message byte accounting; the paper defines overhead only as total
/// generated traffic, so sizes are config knobs.
struct MessageSizes {
    long cam = 300;
    long nt_upload_base = 100;
    long nt_upload_entry = 20;
    long vi_notify_base = 200;
    long request = 100;
    long lte_header = 60;          // per All-LTE unicast
    long short_range_header = 30;  // per local broadcast
};

struct CapabilityMix {
    double both = 1.0;
    double lte_only = 0.0;
    double short_range_only = 0.0;

    void validate() const;
};

struct SimConfig {
    double duration_s = 180.0;

    // Awareness plane (Table-I style defaults: 1 Hz everything, 5 s NT timeout).
    double cam_period_s = 1.0;
    double cam_jitter_s = 0.0;  // uniform +- offset per beacon; 0 disables
    double nt_timeout_s = 5.0;
    double sweep_period_s = 1.0;
    double upload_period_s = 1.0;
    double request_period_s = 1.0;  // <= 0 disables periodic requests

    // Phase offsets keep the 1 Hz planes ordered within each second:
    // beacons, sweeps, uploads, then requests.
    double cam_phase_s = 0.0;
    double sweep_phase_s = 0.25;
    double upload_phase_s = 0.5;
    double request_phase_s = 0.9;

    double short_range_latency_s = 0.005;
    double lte_down_latency_s = 0.050;
    double lte_up_latency_s = 0.060;

    MessageSizes sizes;
    RadioConfig radio;
    double zone_cell_m = 50.0;
    double staleness_bound_s = 5.0;

    // Periodic request template.
    Strategy strategy = Strategy::Navi;
    int k = 10;
    int hop_limit = 1;
    double request_validity_s = 1.0;
    long payload_bytes = 500;
    std::optional<Rect> request_area;   // default: scenario area
    std::optional<Rect> scenario_area;  // default: trace bounds

    CapabilityMix capability_mix;
    /// Explicit per-vehicle capabilities, applied after the mix split.
    std::map<VehicleId, CapabilitySet> capability_overrides;
    std::uint64_t seed = 1;

    void validate() const;
};

// -- events ----------------------------------------------------------------

struct EvEmitCam {
    VehicleId v;
    double base_time;  // beacon grid slot, jitter excluded
};
struct EvExpireSweep {
    VehicleId v;
};
struct EvUploadNt {
    VehicleId v;
};
struct EvRequest {};  // periodic, built from the config template
struct EvInjectedRequest {
    DisseminationRequest req;
};
struct PayloadMsg {
    RequestId request_id = 0;
    int hop = 0;        // short-range hops taken so far (0 = straight off LTE)
    bool relay = true;  // false for All-LTE unicasts
};
struct EvLteDeliver {
    VehicleId v;
    PayloadMsg msg;
};
struct EvShortRangeDeliver {
    VehicleId v;
    std::variant<Cam, PayloadMsg> msg;
};
struct EvGeoIngest {
    VehicleSnapshot snap;
};

using EventPayload = std::variant<EvEmitCam, EvExpireSweep, EvUploadNt, EvRequest,
                                  EvInjectedRequest, EvLteDeliver, EvShortRangeDeliver,
                                  EvGeoIngest>;

/// Deterministic discrete-event engine wiring vehicles, the radio model
/// and the geoserver together. Events execute in strict (time, seq)
/// order; two runs with the same trace, config and seed produce
/// byte-identical logs.
class Simulation {
  public:
    Simulation(const MobilityTrace& trace, SimConfig cfg);

    /// Process events until the configured duration. May be called once.
    void run();

    // -- test/driver hooks -------------------------------------------------
    void schedule(double t, EventPayload payload);
    /// Queues a one-off request (issue_time taken from the request).
    void inject_request(const DisseminationRequest& req);

    double now() const { return now_; }
    const SimConfig& config() const { return cfg_; }
    const MobilityTrace& trace() const { return trace_; }
    const ZoneGrid& grid() const { return grid_; }
    const WorldView& world_view() const { return view_; }
    double radio_range() const { return range_; }
    Rect scenario_area() const { return scenario_area_; }

    DeliveryLog& log() { return log_; }
    const DeliveryLog& log() const { return log_; }

    const VehicleAgent& agent(VehicleId v) const;
    VehicleAgent& agent(VehicleId v);
    const std::map<VehicleId, VehicleAgent>& agents() const { return agents_; }

    /// Ground-truth positions of all appeared vehicles at time t.
    std::map<VehicleId, Position> ground_truth_positions(double t) const;

    // -- used by the dissemination executors --------------------------------
    void log_tx(double t, TxPurpose purpose, int src, int dst, long bytes, Technology tech,
                RequestId req = kNoRequest);
    /// Records a first reception; duplicates are ignored.
    void record_reception(VehicleId v, RequestId req, double t, Technology tech, int hop);
    bool has_received(VehicleId v, RequestId req) const;
    const DisseminationRequest* active_request(RequestId id) const;

    /// One short-range broadcast of the request payload by v at time t
    /// (hop = hops already taken by the copy v holds). No-op if v already
    /// broadcast this request.
    void local_broadcast(VehicleId v, const DisseminationRequest& req, int hop, double t);

    int invariant_violations() const { return invariant_violations_; }

  private:
    struct QueuedEvent {
        double time;
        std::uint64_t seq;
        EventPayload payload;
    };
    struct Later {
        bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    void assign_capabilities();
    void schedule_initial_events();

    void handle(const EvEmitCam& e, double t);
    void handle(const EvExpireSweep& e, double t);
    void handle(const EvUploadNt& e, double t);
    void handle(const EvRequest& e, double t);
    void handle(const EvInjectedRequest& e, double t);
    void handle(const EvLteDeliver& e, double t);
    void handle(const EvShortRangeDeliver& e, double t);
    void handle(const EvGeoIngest& e, double t);

    void issue_request(DisseminationRequest req, double t);
    void on_payload(VehicleId v, const PayloadMsg& msg, Technology tech, double t);

    const MobilityTrace& trace_;
    SimConfig cfg_;
    Rect scenario_area_;
    ZoneGrid grid_;
    double range_ = 0.0;
    WorldView view_;
    std::map<VehicleId, VehicleAgent> agents_;
    DeliveryLog log_;
    std::map<RequestId, DisseminationRequest> active_requests_;
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    RequestId next_request_id_ = 0;
    double now_ = 0.0;
    bool ran_ = false;
    Rng jitter_rng_;
    int invariant_violations_ = 0;
};

}  // namespace navi
