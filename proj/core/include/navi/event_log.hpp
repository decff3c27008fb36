#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "navi/geoserver.hpp"
#include "navi/types.hpp"

namespace navi {

enum class TxPurpose { Cam, NtUpload, Request, ViNotify, LocalBroadcast, LteUnicast };

const char* to_string(TxPurpose p);
TxPurpose tx_purpose_from_string(const std::string& s);

bool is_dissemination_purpose(TxPurpose p);  // request/vi_notify/local_broadcast/lte_unicast

/// Endpoint ids in log records: vehicles are >= 0, the rest are sentinels.
constexpr int kGeoserver = -1;
constexpr int kApplication = -2;
constexpr int kBroadcast = -3;
constexpr int kNoRequest = -1;

struct TransmissionRecord {
    double time = 0.0;
    TxPurpose purpose = TxPurpose::Cam;
    int src = 0;
    int dst = 0;
    long bytes = 0;
    Technology tech = Technology::ShortRange;
    RequestId request_id = kNoRequest;
};

struct ReceptionRecord {
    RequestId request_id = 0;
    VehicleId vehicle = 0;
    double first_rx_time = 0.0;
    Technology tech = Technology::Lte;
    int hop_count = 0;
};

struct SelectionRecord {
    double time = 0.0;
    RequestId request_id = 0;
    StopReason stop_reason = StopReason::ZeroGain;
    std::vector<VehicleId> selected;
    std::vector<int> gains;
};

/// Issued-request bookkeeping: the ground-truth population inside the
/// request area at issue time is the Covered Area denominator.
struct RequestRecord {
    RequestId request_id = 0;
    double issue_time = 0.0;
    Strategy strategy = Strategy::Navi;
    int k = 1;
    long payload_bytes = 0;
    std::vector<VehicleId> population;
};

/// Single source for all metrics: per-vehicle first receptions plus every
/// transmission with technology and byte counts.
struct DeliveryLog {
    std::vector<TransmissionRecord> transmissions;
    std::vector<ReceptionRecord> receptions;
    std::vector<SelectionRecord> selections;
    std::vector<RequestRecord> requests;

    void clear();

    const RequestRecord* find_request(RequestId id) const;
    const SelectionRecord* find_selection(RequestId id) const;
};

/// Line-delimited log: `tx time kind src dst bytes tech req`,
/// `rx time req vehicle tech hop`, `sel time req stop selected gains`,
/// `req id time strategy k payload population`.
void write_event_log(std::ostream& os, const DeliveryLog& log);
DeliveryLog parse_event_log(std::istream& is);

std::string event_log_to_string(const DeliveryLog& log);
DeliveryLog event_log_from_string(const std::string& text);

}  // namespace navi
