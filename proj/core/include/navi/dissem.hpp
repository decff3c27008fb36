#pragma once

#include "navi/geoserver.hpp"
#include "navi/request.hpp"

namespace navi {

class Simulation;

/// Logs the application request, elects virtual infrastructure (navi) or
/// enumerates the LTE population (all_lte) and schedules the deliveries.
/// An empty selection records a failed request; it is not an error.
void handle_request(Simulation& sim, const DisseminationRequest& req, Strategy strategy,
                    double t);

/// Pushes the payload to each selected vehicle over LTE; on reception
/// each broadcasts once on the short-range channel.
void execute_navi(Simulation& sim, const SelectionResult& selection,
                  const DisseminationRequest& req, double t);

/// Baseline: one LTE unicast per in-area LTE-capable vehicle.
void execute_all_lte(Simulation& sim, const DisseminationRequest& req, double t);

}  // namespace navi
