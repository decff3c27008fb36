#include "navi/dissem.hpp"

#include "navi/simcore.hpp"

namespace navi {

void handle_request(Simulation& sim, const DisseminationRequest& req, Strategy strategy,
                    double t) {
    const SimConfig& cfg = sim.config();
    // Overhead includes request packets (application -> geoserver).
    sim.log_tx(t, TxPurpose::Request, kApplication, kGeoserver, cfg.sizes.request,
               Technology::Lte, req.id);
    if (strategy == Strategy::AllLte) {
        execute_all_lte(sim, req, t);
        return;
    }
    SelectionLatencies lat{cfg.lte_down_latency_s, cfg.short_range_latency_s};
    SelectionResult sel =
        select_virtual_infrastructure(sim.world_view(), sim.grid(), req, t, lat);
    sim.log().selections.push_back(
        SelectionRecord{t, req.id, sel.stop_reason, sel.selected, sel.gains});
    if (sel.selected.empty()) return;  // failed request: 0 % coverage, no local traffic
    execute_navi(sim, sel, req, t);
}

void execute_navi(Simulation& sim, const SelectionResult& selection,
                  const DisseminationRequest& req, double t) {
    const SimConfig& cfg = sim.config();
    for (VehicleId v : selection.selected) {
        sim.log_tx(t, TxPurpose::ViNotify, kGeoserver, v,
                   cfg.sizes.vi_notify_base + req.payload_bytes, Technology::Lte, req.id);
        sim.schedule(req.issue_time + cfg.lte_down_latency_s,
                     EvLteDeliver{v, PayloadMsg{req.id, 0, true}});
    }
}

void execute_all_lte(Simulation& sim, const DisseminationRequest& req, double t) {
    const SimConfig& cfg = sim.config();
    for (const auto& [v, p] : sim.ground_truth_positions(t)) {
        if (!sim.agent(v).capabilities.lte()) continue;
        if (!req.area.contains(p)) continue;
        sim.log_tx(t, TxPurpose::LteUnicast, kGeoserver, v,
                   req.payload_bytes + cfg.sizes.lte_header, Technology::Lte, req.id);
        sim.schedule(req.issue_time + cfg.lte_down_latency_s,
                     EvLteDeliver{v, PayloadMsg{req.id, 0, false}});
    }
}

}  // namespace navi
