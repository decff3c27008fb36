#include "navi/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "navi/rng.hpp"

namespace navi {

namespace {

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void MobilityTrace::add_vehicle(VehicleId v, Position initial, double appear_time) {
    if (tracks_.count(v)) throw std::invalid_argument("vehicle already present");
    if (!std::isfinite(initial.x) || !std::isfinite(initial.y))
        throw std::invalid_argument("non-finite initial position");
    tracks_[v] = Track{appear_time, initial, {}};
    duration_ = std::max(duration_, appear_time);
}

void MobilityTrace::add_segment(VehicleId v, double start_time, Position dest, double speed) {
    auto it = tracks_.find(v);
    if (it == tracks_.end()) throw std::out_of_range("unknown vehicle");
    Track& tr = it->second;
    if (speed < 0.0) throw std::invalid_argument("negative speed");
    if (!tr.segments.empty() && start_time < tr.segments.back().start_time)
        throw std::invalid_argument("segments must be added in chronological order");
    auto at = position_at(v, std::max(start_time, tr.appear_time));
    Position from = at ? *at : tr.initial;
    Segment seg;
    seg.start_time = start_time;
    seg.from = from;
    seg.to = dest;
    seg.speed = speed;
    double d = distance(from, dest);
    seg.arrival = (speed > 0.0 && d > 0.0) ? start_time + d / speed
                                           : std::numeric_limits<double>::infinity();
    if (speed == 0.0 || d == 0.0) seg.to = from;  // never moves; pin endpoint
    tr.segments.push_back(seg);
    if (std::isfinite(seg.arrival)) duration_ = std::max(duration_, seg.arrival);
    duration_ = std::max(duration_, start_time);
}

std::vector<VehicleId> MobilityTrace::vehicles() const {
    std::vector<VehicleId> out;
    out.reserve(tracks_.size());
    for (const auto& [v, _] : tracks_) out.push_back(v);
    return out;
}

const MobilityTrace::Track& MobilityTrace::track(VehicleId v) const {
    auto it = tracks_.find(v);
    if (it == tracks_.end())
        throw std::out_of_range("unknown vehicle id " + std::to_string(v));
    return it->second;
}

double MobilityTrace::appear_time(VehicleId v) const { return track(v).appear_time; }

const std::vector<MobilityTrace::Segment>& MobilityTrace::segments(VehicleId v) const {
    return track(v).segments;
}

namespace {

// Last segment with start_time <= t governs the position.
const MobilityTrace::Segment* active_segment(
    const std::vector<MobilityTrace::Segment>& segments, double t) {
    auto it = std::upper_bound(
        segments.begin(), segments.end(), t,
        [](double value, const MobilityTrace::Segment& s) { return value < s.start_time; });
    if (it == segments.begin()) return nullptr;
    return &*std::prev(it);
}

}  // namespace

std::optional<Position> MobilityTrace::position_at(VehicleId v, double t) const {
    const Track& tr = track(v);
    if (t < tr.appear_time) return std::nullopt;
    const Segment* active = active_segment(tr.segments, t);
    if (!active) return tr.initial;
    if (active->speed <= 0.0) return active->from;
    double tt = std::min(t, active->arrival);
    double d = distance(active->from, active->to);
    if (d == 0.0) return active->from;
    double frac = (tt - active->start_time) * active->speed / d;
    frac = std::clamp(frac, 0.0, 1.0);
    return Position{active->from.x + (active->to.x - active->from.x) * frac,
                    active->from.y + (active->to.y - active->from.y) * frac};
}

std::optional<std::pair<double, double>> MobilityTrace::velocity_at(VehicleId v, double t) const {
    const Track& tr = track(v);
    if (t < tr.appear_time) return std::nullopt;
    const Segment* active = active_segment(tr.segments, t);
    if (!active || active->speed <= 0.0 || t >= active->arrival)
        return std::make_pair(0.0, 0.0);
    double d = distance(active->from, active->to);
    if (d == 0.0) return std::make_pair(0.0, 0.0);
    return std::make_pair(active->speed * (active->to.x - active->from.x) / d,
                          active->speed * (active->to.y - active->from.y) / d);
}

Rect MobilityTrace::bounds() const {
    Rect r{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
           {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
    auto grow = [&r](Position p) {
        r.min.x = std::min(r.min.x, p.x);
        r.min.y = std::min(r.min.y, p.y);
        r.max.x = std::max(r.max.x, p.x);
        r.max.y = std::max(r.max.y, p.y);
    };
    for (const auto& [v, tr] : tracks_) {
        grow(tr.initial);
        for (const Segment& s : tr.segments) {
            grow(s.from);
            grow(s.to);
        }
    }
    if (tracks_.empty()) return Rect{{0, 0}, {0, 0}};
    return r;
}

std::string MobilityTrace::to_ns2() const {
    std::ostringstream os;
    for (const auto& [v, tr] : tracks_) {
        os << "$node_(" << v << ") set X_ " << fmt_g17(tr.initial.x) << "\n";
        os << "$node_(" << v << ") set Y_ " << fmt_g17(tr.initial.y) << "\n";
    }
    struct Move {
        double t;
        VehicleId v;
        const Segment* s;
    };
    std::vector<Move> moves;
    for (const auto& [v, tr] : tracks_)
        for (const Segment& s : tr.segments) moves.push_back({s.start_time, v, &s});
    std::stable_sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.v < b.v;
    });
    for (const Move& m : moves) {
        os << "$ns_ at " << fmt_g17(m.t) << " \"$node_(" << m.v << ") setdest "
           << fmt_g17(m.s->to.x) << " " << fmt_g17(m.s->to.y) << " " << fmt_g17(m.s->speed)
           << "\"\n";
    }
    return os.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

double parse_num(const std::string& tok, int line_no, const char* what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw TraceParseError(line_no, std::string("malformed ") + what + " '" + tok + "'");
    }
    if (pos != tok.size() || !std::isfinite(v))
        throw TraceParseError(line_no, std::string("malformed ") + what + " '" + tok + "'");
    return v;
}

// "$node_(12)" -> 12
std::optional<int> parse_node_ref(const std::string& tok) {
    static const std::string prefix = "$node_(";
    if (tok.rfind(prefix, 0) != 0 || tok.back() != ')') return std::nullopt;
    std::string inner = tok.substr(prefix.size(), tok.size() - prefix.size() - 1);
    if (inner.empty()) return std::nullopt;
    for (char c : inner)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return std::stoi(inner);
}

std::string strip_quotes(std::string s) {
    if (!s.empty() && s.front() == '"') s.erase(s.begin());
    if (!s.empty() && s.back() == '"') s.pop_back();
    return s;
}

}  // namespace

MobilityTrace parse_ns2_trace(std::string_view text, std::vector<std::string>* warnings,
                              const TraceLimits& limits) {
    struct Initial {
        std::optional<double> x, y;
    };
    struct Move {
        double t;
        int line_no;
        VehicleId v;
        double x, y, speed;
    };
    std::map<VehicleId, Initial> initials;
    std::vector<Move> moves;

    std::istringstream input{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (auto node = parse_node_ref(toks[0]); node && toks.size() >= 4 && toks[1] == "set") {
            if (toks[2] == "X_" || toks[2] == "Y_") {
                double v = parse_num(toks[3], line_no, "coordinate");
                Initial& ini = initials[*node];
                auto& slot = (toks[2] == "X_") ? ini.x : ini.y;
                if (slot && warnings)
                    warnings->push_back("line " + std::to_string(line_no) +
                                        ": duplicate initial " + toks[2] + " for node " +
                                        std::to_string(*node) + ", last value wins");
                slot = v;
            }
            // Z_ and other settings ignored: 2-D positions suffice.
            continue;
        }
        if (toks[0] == "$ns_" && toks.size() >= 3 && toks[1] == "at") {
            if (toks.size() < 8) continue;  // not a setdest statement
            std::string head = strip_quotes(toks[3]);
            auto node = parse_node_ref(head);
            if (!node || toks[4] != "setdest") continue;
            double t = parse_num(toks[2], line_no, "time");
            double x = parse_num(toks[5], line_no, "x coordinate");
            double y = parse_num(toks[6], line_no, "y coordinate");
            double s = parse_num(strip_quotes(toks[7]), line_no, "speed");
            if (t < 0.0) throw TraceParseError(line_no, "negative time");
            if (s < 0.0) throw TraceParseError(line_no, "negative speed");
            if (s > limits.max_speed_mps)
                throw TraceParseError(line_no, "speed " + std::to_string(s) +
                                                   " m/s exceeds plausible maximum " +
                                                   std::to_string(limits.max_speed_mps));
            moves.push_back({t, line_no, *node, x, y, s});
        }
        // Other statements are ignored (the SUMO exporter subset only).
    }

    MobilityTrace trace;
    for (const auto& [v, ini] : initials) {
        if (ini.x && ini.y) trace.add_vehicle(v, Position{*ini.x, *ini.y});
    }
    std::stable_sort(moves.begin(), moves.end(),
                     [](const Move& a, const Move& b) { return a.t < b.t; });
    for (const Move& m : moves) {
        if (!trace.has_vehicle(m.v)) {
            auto it = initials.find(m.v);
            const char* missing = (it == initials.end() || (!it->second.x && !it->second.y))
                                      ? "initial X_/Y_"
                                  : !it->second.x ? "initial X_"
                                                  : "initial Y_";
            throw TraceParseError(m.line_no, "setdest for node " + std::to_string(m.v) +
                                                 " before " + missing + " was set");
        }
        trace.add_segment(m.v, m.t, Position{m.x, m.y}, m.speed);
    }
    return trace;
}

MobilityTrace load_ns2_trace_file(const std::string& path, std::vector<std::string>* warnings,
                                  const TraceLimits& limits) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ns2_trace(ss.str(), warnings, limits);
}

MobilityTrace generate_synthetic_trace(std::uint64_t seed, int n, Rect area, double duration,
                                       std::pair<double, double> speed_range_mps) {
    if (n < 1) throw std::invalid_argument("need at least one vehicle");
    area.validate();
    if (area.width() <= 0.0 || area.height() <= 0.0)
        throw std::invalid_argument("degenerate area");
    auto [smin, smax] = speed_range_mps;
    if (smin <= 0.0 || smax < smin) throw std::invalid_argument("bad speed range");

    MobilityTrace trace;
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        Position pos{rng.uniform(area.min.x, area.max.x), rng.uniform(area.min.y, area.max.y)};
        trace.add_vehicle(i, pos);
        double t = 0.0;
        while (t < duration) {
            Position dest{rng.uniform(area.min.x, area.max.x),
                          rng.uniform(area.min.y, area.max.y)};
            double speed = rng.uniform(smin, smax);
            double d = distance(pos, dest);
            if (d < 1.0) continue;  // skip degenerate hops
            trace.add_segment(i, t, dest, speed);
            t += d / speed;
            pos = dest;
        }
    }
    trace.set_duration(std::max(trace.duration(), duration));
    return trace;
}

}  // namespace navi
