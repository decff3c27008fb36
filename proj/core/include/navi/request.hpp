#pragma once

#include "navi/types.hpp"

namespace navi {

/// A service-provider dissemination request: target area, payload and the
/// constraints bounding the selection (max set size k, hop budget,
/// information validity time).
struct DisseminationRequest {
    RequestId id = 0;
    Rect area;
    long payload_bytes = 500;
    int k = 1;
    int hop_limit = 1;
    double validity_s = 1.0;
    double issue_time = 0.0;

    void validate() const {
        if (k < 1) throw std::invalid_argument("request k must be >= 1");
        if (payload_bytes < 1) throw std::invalid_argument("payload must be >= 1 byte");
        if (hop_limit < 0) throw std::invalid_argument("hop_limit must be >= 0");
        area.validate();
    }
};

}  // namespace navi
