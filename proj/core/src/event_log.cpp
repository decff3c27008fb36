#include "navi/event_log.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace navi {

const char* to_string(TxPurpose p) {
    switch (p) {
        case TxPurpose::Cam: return "cam";
        case TxPurpose::NtUpload: return "nt_upload";
        case TxPurpose::Request: return "request";
        case TxPurpose::ViNotify: return "vi_notify";
        case TxPurpose::LocalBroadcast: return "local_broadcast";
        case TxPurpose::LteUnicast: return "lte_unicast";
    }
    return "?";
}

TxPurpose tx_purpose_from_string(const std::string& s) {
    if (s == "cam") return TxPurpose::Cam;
    if (s == "nt_upload") return TxPurpose::NtUpload;
    if (s == "request") return TxPurpose::Request;
    if (s == "vi_notify") return TxPurpose::ViNotify;
    if (s == "local_broadcast") return TxPurpose::LocalBroadcast;
    if (s == "lte_unicast") return TxPurpose::LteUnicast;
    throw std::invalid_argument("unknown tx purpose: " + s);
}

bool is_dissemination_purpose(TxPurpose p) {
    return p == TxPurpose::Request || p == TxPurpose::ViNotify ||
           p == TxPurpose::LocalBroadcast || p == TxPurpose::LteUnicast;
}

void DeliveryLog::clear() {
    transmissions.clear();
    receptions.clear();
    selections.clear();
    requests.clear();
}

const RequestRecord* DeliveryLog::find_request(RequestId id) const {
    for (const RequestRecord& r : requests)
        if (r.request_id == id) return &r;
    return nullptr;
}

const SelectionRecord* DeliveryLog::find_selection(RequestId id) const {
    for (const SelectionRecord& s : selections)
        if (s.request_id == id) return &s;
    return nullptr;
}

namespace {

std::string fmt_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", t);
    return buf;
}

Technology tech_from_string(const std::string& s) {
    if (s == "sr") return Technology::ShortRange;
    if (s == "lte") return Technology::Lte;
    throw std::invalid_argument("unknown technology: " + s);
}

std::string join_ints(const std::vector<int>& v) {
    if (v.empty()) return "-";
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    if (s == "-") return out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

}  // namespace

void write_event_log(std::ostream& os, const DeliveryLog& log) {
    for (const RequestRecord& r : log.requests)
        os << "req " << r.request_id << ' ' << fmt_time(r.issue_time) << ' '
           << to_string(r.strategy) << ' ' << r.k << ' ' << r.payload_bytes << ' '
           << join_ints(r.population) << '\n';
    for (const SelectionRecord& s : log.selections)
        os << "sel " << fmt_time(s.time) << ' ' << s.request_id << ' '
           << to_string(s.stop_reason) << ' ' << join_ints(s.selected) << ' '
           << join_ints(s.gains) << '\n';
    for (const TransmissionRecord& t : log.transmissions)
        os << "tx " << fmt_time(t.time) << ' ' << to_string(t.purpose) << ' ' << t.src << ' '
           << t.dst << ' ' << t.bytes << ' ' << to_string(t.tech) << ' ' << t.request_id
           << '\n';
    for (const ReceptionRecord& r : log.receptions)
        os << "rx " << fmt_time(r.first_rx_time) << ' ' << r.request_id << ' ' << r.vehicle
           << ' ' << to_string(r.tech) << ' ' << r.hop_count << '\n';
}

DeliveryLog parse_event_log(std::istream& is) {
    DeliveryLog log;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        try {
            if (tag == "req") {
                RequestRecord r;
                std::string strategy, pop;
                ls >> r.request_id >> r.issue_time >> strategy >> r.k >> r.payload_bytes >> pop;
                r.strategy = (strategy == "navi") ? Strategy::Navi : Strategy::AllLte;
                r.population = split_ints(pop);
                log.requests.push_back(std::move(r));
            } else if (tag == "sel") {
                SelectionRecord s;
                std::string stop, sel, gains;
                ls >> s.time >> s.request_id >> stop >> sel >> gains;
                s.stop_reason = stop_reason_from_string(stop);
                s.selected = split_ints(sel);
                s.gains = split_ints(gains);
                log.selections.push_back(std::move(s));
            } else if (tag == "tx") {
                TransmissionRecord t;
                std::string purpose, tech;
                ls >> t.time >> purpose >> t.src >> t.dst >> t.bytes >> tech >> t.request_id;
                t.purpose = tx_purpose_from_string(purpose);
                t.tech = tech_from_string(tech);
                log.transmissions.push_back(t);
            } else if (tag == "rx") {
                ReceptionRecord r;
                std::string tech;
                ls >> r.first_rx_time >> r.request_id >> r.vehicle >> tech >> r.hop_count;
                r.tech = tech_from_string(tech);
                log.receptions.push_back(r);
            }
            // unknown tags skipped: forward compatibility
        } catch (const std::exception& e) {
            throw std::runtime_error("event log line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        if (ls.fail() && !ls.eof())
            throw std::runtime_error("event log line " + std::to_string(line_no) +
                                     ": malformed record");
    }
    return log;
}

std::string event_log_to_string(const DeliveryLog& log) {
    std::ostringstream os;
    write_event_log(os, log);
    return os.str();
}

DeliveryLog event_log_from_string(const std::string& text) {
    std::istringstream is(text);
    return parse_event_log(is);
}

}  // namespace navi
