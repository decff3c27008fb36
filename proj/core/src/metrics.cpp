#include "navi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "navi/radio.hpp"

namespace navi {

namespace {

std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string opt_cell(const std::optional<double>& v) { return v ? fmt_g9(*v) : ""; }

void write_file_atomically(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace

std::optional<double> covered_area_pct(const DeliveryLog& log, RequestId request_id,
                                       const std::vector<VehicleId>& population) {
    if (population.empty()) return std::nullopt;
    std::set<VehicleId> pop(population.begin(), population.end());
    int receivers = 0;
    for (const ReceptionRecord& r : log.receptions)
        if (r.request_id == request_id && pop.count(r.vehicle)) ++receivers;
    return 100.0 * receivers / static_cast<double>(pop.size());
}

int vi_usage(const SelectionRecord& selection) {
    return static_cast<int>(selection.selected.size());
}

OverheadBytes dissemination_overhead(const DeliveryLog& log, RequestId request_id) {
    OverheadBytes b;
    for (const TransmissionRecord& t : log.transmissions) {
        if (t.request_id != request_id || !is_dissemination_purpose(t.purpose)) continue;
        (t.tech == Technology::Lte ? b.lte : b.short_range) += t.bytes;
    }
    return b;
}

OverheadBytes background_overhead(const DeliveryLog& log) {
    OverheadBytes b;
    for (const TransmissionRecord& t : log.transmissions) {
        if (is_dissemination_purpose(t.purpose)) continue;
        (t.tech == Technology::Lte ? b.lte : b.short_range) += t.bytes;
    }
    return b;
}

std::optional<DelayStats> delay_stats(const DeliveryLog& log, RequestId request_id,
                                      double issue_time) {
    std::vector<double> delays_ms;
    for (const ReceptionRecord& r : log.receptions)
        if (r.request_id == request_id)
            delays_ms.push_back((r.first_rx_time - issue_time) * 1000.0);
    if (delays_ms.empty()) return std::nullopt;
    std::sort(delays_ms.begin(), delays_ms.end());
    DelayStats s;
    s.n = static_cast<int>(delays_ms.size());
    double sum = 0.0;
    for (double d : delays_ms) sum += d;
    s.mean_ms = sum / s.n;
    auto nearest_rank = [&delays_ms](double p) {
        auto n = delays_ms.size();
        std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        rank = std::clamp<std::size_t>(rank, 1, n);
        return delays_ms[rank - 1];
    };
    s.p50_ms = nearest_rank(0.50);
    s.p95_ms = nearest_rank(0.95);
    s.max_ms = delays_ms.back();
    return s;
}

std::vector<RequestMetrics> per_request_metrics(const DeliveryLog& log,
                                                const std::string& config_id, int k,
                                                double tx_power_dbm) {
    std::vector<RequestMetrics> rows;
    rows.reserve(log.requests.size());
    for (const RequestRecord& req : log.requests) {
        RequestMetrics m;
        m.config_id = config_id;
        m.request_id = req.request_id;
        m.strategy = req.strategy;
        m.k = k;
        m.tx_power_dbm = tx_power_dbm;
        m.covered_pct = covered_area_pct(log, req.request_id, req.population);
        if (const SelectionRecord* sel = log.find_selection(req.request_id))
            m.vi_count = vi_usage(*sel);
        OverheadBytes b = dissemination_overhead(log, req.request_id);
        m.bytes_lte = b.lte;
        m.bytes_sr = b.short_range;
        if (auto d = delay_stats(log, req.request_id, req.issue_time)) {
            m.delay_mean_ms = d->mean_ms;
            m.delay_p95_ms = d->p95_ms;
        }
        rows.push_back(std::move(m));
    }
    return rows;
}

double t_quantile_975(int df) {
    static const double table[30] = {
        12.706204736432, 4.302652729696, 3.182446305284, 2.776445105198, 2.570581835636,
        2.446911851145,  2.364624251593, 2.306004135204, 2.262157162854, 2.228138851965,
        2.200985160083,  2.178812829663, 2.160368656461, 2.144786687917, 2.131449545559,
        2.119905299221,  2.109815577833, 2.100922040241, 2.093024054408, 2.085963447266,
        2.079613844728,  2.073873067904, 2.068657610419, 2.063898561628, 2.059538552753,
        2.055529438643,  2.051830516480, 2.048407141795, 2.045229642133, 2.042272456301};
    if (df < 1) throw std::invalid_argument("df must be >= 1");
    if (df <= 30) return table[df - 1];
    // Linear interpolation in 1/df through the usual anchor rows.
    struct Anchor {
        double inv_df, t;
    };
    static const Anchor anchors[] = {{1.0 / 30, 2.042272456301},
                                     {1.0 / 40, 2.021075390306},
                                     {1.0 / 60, 2.000297822014},
                                     {1.0 / 120, 1.979930405053},
                                     {0.0, 1.959963984540}};
    double x = 1.0 / df;
    for (int i = 1; i < 5; ++i) {
        if (x >= anchors[i].inv_df) {
            const Anchor& hi = anchors[i - 1];
            const Anchor& lo = anchors[i];
            double w = (x - lo.inv_df) / (hi.inv_df - lo.inv_df);
            return lo.t + w * (hi.t - lo.t);
        }
    }
    return 1.959963984540;
}

ConfidenceInterval mean_ci95(const std::vector<double>& samples) {
    if (samples.empty()) throw std::invalid_argument("need at least one sample");
    ConfidenceInterval ci;
    ci.n = static_cast<int>(samples.size());
    double sum = 0.0;
    for (double s : samples) sum += s;
    ci.mean = sum / ci.n;
    if (ci.n == 1) {
        ci.low = ci.high = ci.mean;
        return ci;
    }
    double ss = 0.0;
    for (double s : samples) ss += (s - ci.mean) * (s - ci.mean);
    double sd = std::sqrt(ss / (ci.n - 1));
    double half = t_quantile_975(ci.n - 1) * sd / std::sqrt(static_cast<double>(ci.n));
    ci.low = ci.mean - half;
    ci.high = ci.mean + half;
    return ci;
}

namespace {

void append_metric_rows(std::vector<AggregateRow>& out, const std::string& config_id,
                        const std::string& metric, const std::vector<double>& samples) {
    if (samples.empty()) return;
    ConfidenceInterval ci = mean_ci95(samples);
    out.push_back(AggregateRow{config_id, metric, ci.mean, ci.low, ci.high, ci.n});
}

}  // namespace

std::vector<AggregateRow> aggregate_metrics(const std::vector<RequestMetrics>& rows) {
    std::vector<std::string> config_order;
    std::map<std::string, std::vector<const RequestMetrics*>> by_config;
    for (const RequestMetrics& r : rows) {
        auto& bucket = by_config[r.config_id];
        if (bucket.empty()) config_order.push_back(r.config_id);
        bucket.push_back(&r);
    }

    std::vector<AggregateRow> out;
    for (const std::string& cid : config_order) {
        const auto& bucket = by_config[cid];
        std::vector<double> covered, vi, lte, sr, total, dmean, dp95;
        for (const RequestMetrics* r : bucket) {
            if (r->covered_pct) covered.push_back(*r->covered_pct);
            vi.push_back(r->vi_count);
            lte.push_back(static_cast<double>(r->bytes_lte));
            sr.push_back(static_cast<double>(r->bytes_sr));
            total.push_back(static_cast<double>(r->bytes_lte + r->bytes_sr));
            if (r->delay_mean_ms) dmean.push_back(*r->delay_mean_ms);
            if (r->delay_p95_ms) dp95.push_back(*r->delay_p95_ms);
        }
        append_metric_rows(out, cid, "covered_pct", covered);
        append_metric_rows(out, cid, "vi_count", vi);
        append_metric_rows(out, cid, "bytes_lte", lte);
        append_metric_rows(out, cid, "bytes_sr", sr);
        append_metric_rows(out, cid, "bytes_total", total);
        append_metric_rows(out, cid, "delay_mean_ms", dmean);
        append_metric_rows(out, cid, "delay_p95_ms", dp95);
    }

    // Paired overhead ratio: navi vs all_lte at the same (k, tx power),
    // requests matched by id (both strategies share the issue schedule).
    for (const std::string& cid : config_order) {
        const auto& bucket = by_config[cid];
        if (bucket.empty() || bucket.front()->strategy != Strategy::Navi) continue;
        int k = bucket.front()->k;
        double tx = bucket.front()->tx_power_dbm;
        const std::vector<const RequestMetrics*>* baseline = nullptr;
        std::string baseline_cid;
        for (const std::string& other : config_order) {
            const auto& ob = by_config[other];
            if (!ob.empty() && ob.front()->strategy == Strategy::AllLte &&
                ob.front()->k == k && ob.front()->tx_power_dbm == tx) {
                baseline = &ob;
                baseline_cid = other;
                break;
            }
        }
        if (!baseline) continue;
        std::map<RequestId, double> base_total;
        for (const RequestMetrics* r : *baseline)
            base_total[r->request_id] = static_cast<double>(r->bytes_lte + r->bytes_sr);
        std::vector<double> ratios;
        for (const RequestMetrics* r : bucket) {
            auto it = base_total.find(r->request_id);
            if (it == base_total.end() || it->second <= 0.0) continue;
            ratios.push_back(static_cast<double>(r->bytes_lte + r->bytes_sr) / it->second);
        }
        append_metric_rows(out, cid, "overhead_ratio_navi_over_all_lte", ratios);
    }
    return out;
}

std::vector<int> degree_samples(const MobilityTrace& trace, double range, double t0,
                                double t1, double dt) {
    if (dt <= 0) throw std::invalid_argument("dt must be positive");
    std::vector<int> samples;
    for (double t = t0; t < t1; t += dt) {
        std::map<VehicleId, Position> pos;
        for (VehicleId v : trace.vehicles())
            if (auto p = trace.position_at(v, t)) pos[v] = *p;
        if (pos.empty()) continue;
        ConnectivityGraph g = connectivity_snapshot(pos, range, t);
        for (int d : g.degrees()) samples.push_back(d);
    }
    return samples;
}

double median_degree(std::vector<int> samples) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    std::sort(samples.begin(), samples.end());
    std::size_t n = samples.size();
    if (n % 2 == 1) return samples[n / 2];
    return (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

std::vector<CdfPoint> degree_cdf(std::vector<int> samples) {
    std::vector<CdfPoint> out;
    if (samples.empty()) return out;
    std::sort(samples.begin(), samples.end());
    std::size_t n = samples.size();
    std::size_t i = 0;
    std::size_t seen = 0;
    while (i < n) {
        int d = samples[i];
        while (i < n && samples[i] == d) {
            ++i;
            ++seen;
        }
        out.push_back(CdfPoint{d, static_cast<double>(seen) / static_cast<double>(n)});
    }
    return out;
}

void write_requests_csv(const std::string& path, const std::vector<RequestMetrics>& rows) {
    std::ostringstream os;
    os << "config_id,request_id,strategy,k,tx_power_dbm,covered_pct,vi_count,bytes_lte,"
          "bytes_sr,delay_mean_ms,delay_p95_ms\n";
    for (const RequestMetrics& r : rows) {
        os << r.config_id << ',' << r.request_id << ',' << to_string(r.strategy) << ',' << r.k
           << ',' << fmt_g9(r.tx_power_dbm) << ',' << opt_cell(r.covered_pct) << ','
           << r.vi_count << ',' << r.bytes_lte << ',' << r.bytes_sr << ','
           << opt_cell(r.delay_mean_ms) << ',' << opt_cell(r.delay_p95_ms) << '\n';
    }
    write_file_atomically(path, os.str());
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ostringstream os;
    os << "config_id,metric,mean,ci95_low,ci95_high,n\n";
    for (const AggregateRow& r : rows)
        os << r.config_id << ',' << r.metric << ',' << fmt_g9(r.mean) << ','
           << fmt_g9(r.ci95_low) << ',' << fmt_g9(r.ci95_high) << ',' << r.n << '\n';
    write_file_atomically(path, os.str());
}

void write_degree_cdf_csv(
    const std::string& path,
    const std::vector<std::pair<double, std::vector<CdfPoint>>>& by_power) {
    std::ostringstream os;
    os << "tx_power_dbm,degree,cdf\n";
    for (const auto& [power, cdf] : by_power)
        for (const CdfPoint& p : cdf)
            os << fmt_g9(power) << ',' << p.degree << ',' << fmt_g9(p.cdf) << '\n';
    write_file_atomically(path, os.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

}  // namespace

std::vector<RequestMetrics> parse_requests_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<RequestMetrics> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c = split_csv_line(line);
        if (c.size() != 11) throw std::runtime_error("bad requests csv row: " + line);
        RequestMetrics m;
        m.config_id = c[0];
        m.request_id = std::stoi(c[1]);
        m.strategy = (c[2] == "navi") ? Strategy::Navi : Strategy::AllLte;
        m.k = std::stoi(c[3]);
        m.tx_power_dbm = std::stod(c[4]);
        m.covered_pct = parse_opt(c[5]);
        m.vi_count = std::stoi(c[6]);
        m.bytes_lte = std::stol(c[7]);
        m.bytes_sr = std::stol(c[8]);
        m.delay_mean_ms = parse_opt(c[9]);
        m.delay_p95_ms = parse_opt(c[10]);
        rows.push_back(std::move(m));
    }
    return rows;
}

std::vector<AggregateRow> parse_aggregate_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<AggregateRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c = split_csv_line(line);
        if (c.size() != 6) throw std::runtime_error("bad aggregate csv row: " + line);
        rows.push_back(AggregateRow{c[0], c[1], std::stod(c[2]), std::stod(c[3]),
                                    std::stod(c[4]), std::stoi(c[5])});
    }
    return rows;
}

}  // namespace navi
