#include "navi/simcore.hpp"

#include <algorithm>
#include <cmath>

#include "navi/dissem.hpp"

namespace navi {

void NeighborTable::upsert(const Cam& cam, double now) {
    if (cam.sender == owner_) throw SimError("neighbor table owner cannot be its own entry");
    entries_[cam.sender] = NeighborEntry{cam, now};
}

void NeighborTable::sweep(double now, double timeout) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (now - it->second.last_heard > timeout)
            it = entries_.erase(it);
        else
            ++it;
    }
}

std::vector<const NeighborEntry*> NeighborTable::fresh_entries(double now,
                                                               double timeout) const {
    std::vector<const NeighborEntry*> out;
    for (const auto& [v, e] : entries_)
        if (now - e.last_heard <= timeout) out.push_back(&e);
    return out;
}

void VehicleAgent::process_cam(const Cam& cam, double now) {
    neighbor_table.upsert(cam, now);
}

void CapabilityMix::validate() const {
    if (both < 0 || lte_only < 0 || short_range_only < 0)
        throw std::invalid_argument("capability fractions must be non-negative");
    double sum = both + lte_only + short_range_only;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("capability fractions must sum to 1");
}

void SimConfig::validate() const {
    if (duration_s <= 0) throw std::invalid_argument("duration must be positive");
    if (cam_period_s <= 0 || sweep_period_s <= 0 || upload_period_s <= 0)
        throw std::invalid_argument("periods must be positive");
    if (nt_timeout_s <= 0) throw std::invalid_argument("nt timeout must be positive");
    if (cam_jitter_s < 0 || cam_jitter_s > cam_period_s / 4)
        throw std::invalid_argument("cam jitter must be in [0, period/4]");
    if (short_range_latency_s < 0 || lte_down_latency_s < 0 || lte_up_latency_s < 0)
        throw std::invalid_argument("latencies must be non-negative");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (hop_limit < 1) throw std::invalid_argument("hop_limit must be >= 1");
    if (payload_bytes < 1) throw std::invalid_argument("payload must be >= 1 byte");
    if (zone_cell_m <= 0) throw std::invalid_argument("zone cell must be positive");
    radio.validate();
    capability_mix.validate();
}

Simulation::Simulation(const MobilityTrace& trace, SimConfig cfg)
    : trace_(trace),
      cfg_(std::move(cfg)),
      view_(cfg_.staleness_bound_s),
      jitter_rng_(derive_seed(cfg_.seed, 0x6a17)) {
    cfg_.validate();
    scenario_area_ = cfg_.scenario_area ? *cfg_.scenario_area : trace_.bounds();
    scenario_area_.validate();
    grid_ = ZoneGrid(scenario_area_, cfg_.zone_cell_m);
    range_ = resolve_range(cfg_.radio);
    for (VehicleId v : trace_.vehicles()) {
        VehicleAgent a;
        a.id = v;
        a.neighbor_table = NeighborTable(v);
        agents_.emplace(v, std::move(a));
    }
    assign_capabilities();
    schedule_initial_events();
}

void Simulation::assign_capabilities() {
    std::vector<VehicleId> ids;
    ids.reserve(agents_.size());
    for (const auto& [v, _] : agents_) ids.push_back(v);
    // Seeded shuffle so mixed-capability populations are reproducible.
    Rng rng(derive_seed(cfg_.seed, 0xcafe));
    for (std::size_t i = ids.size(); i > 1; --i)
        std::swap(ids[i - 1], ids[rng.uniform_int(0, static_cast<int>(i) - 1)]);
    const auto n = static_cast<double>(ids.size());
    auto n_both = static_cast<std::size_t>(std::lround(cfg_.capability_mix.both * n));
    auto n_lte = static_cast<std::size_t>(std::lround(cfg_.capability_mix.lte_only * n));
    for (std::size_t i = 0; i < ids.size(); ++i) {
        CapabilitySet caps = i < n_both                ? CapabilitySet::both()
                             : i < n_both + n_lte      ? CapabilitySet::lte_only()
                                                       : CapabilitySet::short_range_only();
        agents_.at(ids[i]).capabilities = caps;
    }
    for (const auto& [v, caps] : cfg_.capability_overrides) {
        auto it = agents_.find(v);
        if (it != agents_.end()) it->second.capabilities = caps;
    }
}

void Simulation::schedule_initial_events() {
    for (const auto& [v, a] : agents_) {
        if (a.capabilities.short_range()) {
            schedule(cfg_.cam_phase_s, EvEmitCam{v, cfg_.cam_phase_s});
            schedule(cfg_.sweep_phase_s, EvExpireSweep{v});
        }
        if (a.capabilities.lte()) schedule(cfg_.upload_phase_s, EvUploadNt{v});
    }
    if (cfg_.request_period_s > 0) schedule(cfg_.request_phase_s, EvRequest{});
}

void Simulation::schedule(double t, EventPayload payload) {
    if (t < now_)
        throw SimError("event scheduled in the past (t=" + std::to_string(t) +
                       " < now=" + std::to_string(now_) + ")");
    queue_.push(QueuedEvent{t, next_seq_++, std::move(payload)});
}

void Simulation::inject_request(const DisseminationRequest& req) {
    req.validate();
    schedule(req.issue_time, EvInjectedRequest{req});
}

const VehicleAgent& Simulation::agent(VehicleId v) const {
    auto it = agents_.find(v);
    if (it == agents_.end()) throw std::out_of_range("unknown vehicle id");
    return it->second;
}

VehicleAgent& Simulation::agent(VehicleId v) {
    auto it = agents_.find(v);
    if (it == agents_.end()) throw std::out_of_range("unknown vehicle id");
    return it->second;
}

std::map<VehicleId, Position> Simulation::ground_truth_positions(double t) const {
    std::map<VehicleId, Position> out;
    for (const auto& [v, _] : agents_)
        if (auto p = trace_.position_at(v, t)) out[v] = *p;
    return out;
}

void Simulation::run() {
    if (ran_) throw SimError("run() may only be called once");
    ran_ = true;
    while (!queue_.empty()) {
        QueuedEvent ev = queue_.top();
        queue_.pop();
        if (ev.time >= cfg_.duration_s) break;
        if (ev.time < now_) throw SimError("event queue order violated");
        now_ = ev.time;
        std::visit([this, &ev](const auto& payload) { handle(payload, ev.time); },
                   ev.payload);
    }
    now_ = cfg_.duration_s;
}

void Simulation::handle(const EvEmitCam& e, double t) {
    const VehicleAgent& a = agent(e.v);
    double next_base = e.base_time + cfg_.cam_period_s;
    if (next_base < cfg_.duration_s) {
        double jitter = cfg_.cam_jitter_s > 0
                            ? jitter_rng_.uniform(-cfg_.cam_jitter_s, cfg_.cam_jitter_s)
                            : 0.0;
        schedule(std::max(t, next_base + jitter), EvEmitCam{e.v, next_base});
    }
    if (!a.capabilities.short_range()) return;
    auto pos = trace_.position_at(e.v, t);
    if (!pos) return;  // not yet appeared
    auto vel = trace_.velocity_at(e.v, t);
    Cam cam;
    cam.sender = e.v;
    cam.position = *pos;
    cam.speed_mps = vel ? std::hypot(vel->first, vel->second) : 0.0;
    cam.heading_rad = (vel && (vel->first != 0.0 || vel->second != 0.0))
                          ? std::atan2(vel->second, vel->first)
                          : 0.0;
    cam.capabilities = a.capabilities;
    cam.gen_time = t;
    log_tx(t, TxPurpose::Cam, e.v, kBroadcast, cfg_.sizes.cam, Technology::ShortRange);
    for (const auto& [w, wa] : agents_) {
        if (w == e.v || !wa.capabilities.short_range()) continue;
        auto wp = trace_.position_at(w, t);
        if (!wp || !link_exists(*pos, *wp, range_)) continue;
        schedule(t + cfg_.short_range_latency_s, EvShortRangeDeliver{w, cam});
    }
}

void Simulation::handle(const EvExpireSweep& e, double t) {
    VehicleAgent& a = agent(e.v);
    a.neighbor_table.sweep(t, cfg_.nt_timeout_s);
    // Freshness invariant: after a sweep at t no entry is older than the timeout.
    for (const auto& [v, entry] : a.neighbor_table.entries())
        if (t - entry.last_heard > cfg_.nt_timeout_s) ++invariant_violations_;
    double next = t + cfg_.sweep_period_s;
    if (next < cfg_.duration_s) schedule(next, EvExpireSweep{e.v});
}

void Simulation::handle(const EvUploadNt& e, double t) {
    const VehicleAgent& a = agent(e.v);
    double next = t + cfg_.upload_period_s;
    if (next < cfg_.duration_s) schedule(next, EvUploadNt{e.v});
    if (!a.capabilities.lte()) return;
    auto pos = trace_.position_at(e.v, t);
    if (!pos) return;
    VehicleSnapshot snap;
    snap.owner = e.v;
    snap.position = *pos;
    snap.capabilities = a.capabilities;
    snap.time = t;
    for (const NeighborEntry* entry : a.neighbor_table.fresh_entries(t, cfg_.nt_timeout_s))
        snap.neighbors.push_back(NeighborObservation{entry->last_cam.sender,
                                                     entry->last_cam.position,
                                                     entry->last_cam.capabilities});
    long bytes = cfg_.sizes.nt_upload_base +
                 cfg_.sizes.nt_upload_entry * static_cast<long>(snap.neighbors.size());
    log_tx(t, TxPurpose::NtUpload, e.v, kGeoserver, bytes, Technology::Lte);
    schedule(t + cfg_.lte_up_latency_s, EvGeoIngest{std::move(snap)});
}

void Simulation::handle(const EvRequest&, double t) {
    double next = t + cfg_.request_period_s;
    if (next < cfg_.duration_s) schedule(next, EvRequest{});
    DisseminationRequest req;
    req.area = cfg_.request_area ? *cfg_.request_area : scenario_area_;
    req.payload_bytes = cfg_.payload_bytes;
    req.k = cfg_.k;
    req.hop_limit = cfg_.hop_limit;
    req.validity_s = cfg_.request_validity_s;
    req.issue_time = t;
    issue_request(req, t);
}

void Simulation::handle(const EvInjectedRequest& e, double t) {
    DisseminationRequest req = e.req;
    req.issue_time = t;
    issue_request(req, t);
}

void Simulation::issue_request(DisseminationRequest req, double t) {
    req.id = next_request_id_++;
    RequestRecord rec;
    rec.request_id = req.id;
    rec.issue_time = t;
    rec.strategy = cfg_.strategy;
    rec.k = req.k;
    rec.payload_bytes = req.payload_bytes;
    for (const auto& [v, p] : ground_truth_positions(t))
        if (req.area.contains(p)) rec.population.push_back(v);
    log_.requests.push_back(std::move(rec));
    active_requests_.emplace(req.id, req);
    handle_request(*this, active_requests_.at(req.id), cfg_.strategy, t);
}

void Simulation::handle(const EvLteDeliver& e, double t) {
    const VehicleAgent& a = agent(e.v);
    if (!a.capabilities.lte()) return;
    on_payload(e.v, e.msg, Technology::Lte, t);
}

void Simulation::handle(const EvShortRangeDeliver& e, double t) {
    VehicleAgent& a = agent(e.v);
    if (!a.capabilities.short_range()) return;
    if (const Cam* cam = std::get_if<Cam>(&e.msg)) {
        if (cam->sender != e.v) a.process_cam(*cam, t);
        return;
    }
    on_payload(e.v, std::get<PayloadMsg>(e.msg), Technology::ShortRange, t);
}

void Simulation::on_payload(VehicleId v, const PayloadMsg& msg, Technology tech, double t) {
    record_reception(v, msg.request_id, t, tech, msg.hop);
    if (!msg.relay) return;
    const DisseminationRequest* req = active_request(msg.request_id);
    if (!req) return;
    if (msg.hop < req->hop_limit) local_broadcast(v, *req, msg.hop, t);
}

void Simulation::handle(const EvGeoIngest& e, double) { view_.ingest(e.snap); }

void Simulation::log_tx(double t, TxPurpose purpose, int src, int dst, long bytes,
                        Technology tech, RequestId req) {
    log_.transmissions.push_back(TransmissionRecord{t, purpose, src, dst, bytes, tech, req});
}

void Simulation::record_reception(VehicleId v, RequestId req, double t, Technology tech,
                                  int hop) {
    VehicleAgent& a = agent(v);
    auto [it, inserted] = a.first_reception.emplace(req, t);
    if (!inserted) return;  // duplicate; first reception is immutable
    log_.receptions.push_back(ReceptionRecord{req, v, t, tech, hop});
}

bool Simulation::has_received(VehicleId v, RequestId req) const {
    return agent(v).first_reception.count(req) != 0;
}

const DisseminationRequest* Simulation::active_request(RequestId id) const {
    auto it = active_requests_.find(id);
    return it == active_requests_.end() ? nullptr : &it->second;
}

void Simulation::local_broadcast(VehicleId v, const DisseminationRequest& req, int hop,
                                 double t) {
    VehicleAgent& a = agent(v);
    if (!a.capabilities.short_range()) return;
    if (!a.broadcasted.insert(req.id).second) return;  // one broadcast per request
    auto pos = trace_.position_at(v, t);
    if (!pos) return;
    log_tx(t, TxPurpose::LocalBroadcast, v, kBroadcast,
           req.payload_bytes + cfg_.sizes.short_range_header, Technology::ShortRange,
           req.id);
    // Delivery times are composed from the request issue time so that every
    // recorded delay is exactly lte_down + h * short_range.
    double rx_time =
        req.issue_time + (cfg_.lte_down_latency_s + (hop + 1) * cfg_.short_range_latency_s);
    for (const auto& [w, wa] : agents_) {
        if (w == v || !wa.capabilities.short_range()) continue;
        auto wp = trace_.position_at(w, t);
        if (!wp || !link_exists(*pos, *wp, range_)) continue;
        schedule(rx_time, EvShortRangeDeliver{w, PayloadMsg{req.id, hop + 1, true}});
    }
}

}  // namespace navi
