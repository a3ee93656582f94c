#include "dreadlock/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dreadlock {

namespace {

std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // Keep a float marker so readers never see an integer.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void dump(const Json& j, int indent, int level, std::string& out) {
    const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * (level + 1), ' ') : "";
    const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * level, ' ') : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",";
                first = false;
                out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
                dump(it.value(), indent, level + 1, out);
            }
            out += close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Short numeric arrays (complex numbers) stay on one line.
            const bool inline_nums = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const Json& e) {
                                         return e.is_number();
                                     });
            out += "[";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += inline_nums ? ", " : ",";
                first = false;
                if (!inline_nums) out += pad;
                dump(e, indent, level + 1, out);
            }
            out += (inline_nums ? "" : close) + "]";
            return;
        }
        case Json::value_t::number_float:
            out += fmt17(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump(j, indent, 0, out);
    out += "\n";
    return out;
}

void merge_into(Json& dst, const Json& src) {
    for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json map_json(const EntireMap& m) {
    Json j;
    j["id"] = m.id();
    j["family"] = m.family() == Family::Exponential ? "exponential" : "cosine";
    j["a"] = to_json(m.a());
    if (m.family() == Family::Cosine) j["b"] = to_json(m.b());
    j["disc_radius"] = m.disc_radius();
    j["cut_angle"] = m.cut_angle();
    return j;
}

Json to_json(const Classification& c) { return to_string(c); }

Json to_json(const PeriodicPoint& p, Family) {
    Json j;
    j["point"] = to_json(p.point);
    j["period"] = p.period;
    j["multiplier"] = to_json(p.multiplier);
    j["classification"] = to_json(p.classification);
    j["residual"] = p.residual;
    j["multiple_root"] = p.multiple_root;
    return j;
}

Json to_json(const LandingReport& r) {
    Json j;
    j["status"] = to_string(r.status);
    if (r.status == LandingReport::Status::Cycling) j["cycle_estimate"] = r.cycle_estimate;
    if (r.status == LandingReport::Status::Landed) {
        j["landing_point"] = to_json(r.landing_point);
        j["period"] = r.period;
        j["multiplier"] = to_json(r.multiplier);
        j["classification"] = to_json(r.classification);
        j["residual"] = r.residual;
        j["multiple_root"] = r.multiple_root;
    }
    j["raw_limit"] = to_json(r.raw_limit);
    j["gap_final"] = r.gap_final;
    j["steps"] = r.steps;
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    return j;
}

Json landing_json(const ExternalAddress& s, const LandingReport& r, Family family) {
    Json j;
    j["address"] = format_address(s, family);
    merge_into(j, to_json(r));
    return j;
}

Json to_json(const RayPolyline& ray, Family family) {
    Json j;
    j["address"] = format_address(ray.address, family);
    Json t = Json::array(), v = Json::array();
    for (double x : ray.t_values) t.push_back(x);
    for (cplx z : ray.vertices) v.push_back(to_json(z));
    j["t_values"] = std::move(t);
    j["vertices"] = std::move(v);
    return j;
}

Json to_json(const PullbackOrbit& orbit, Family family) {
    Json j;
    j["address"] = format_address(orbit.address, family);
    j["base"] = to_json(orbit.base);
    Json pts = Json::array(), gaps = Json::array();
    for (cplx z : orbit.points) pts.push_back(to_json(z));
    for (double g : orbit.gaps) gaps.push_back(g);
    j["points"] = std::move(pts);
    j["gaps"] = std::move(gaps);
    return j;
}

Json to_json(const ScanResult& scan, Family family) {
    Json j;
    j["seeds"] = scan.seeds;
    j["failures"] = scan.failures;
    j["non_primitive"] = scan.non_primitive;
    j["outside_window"] = scan.outside_window;
    Json pts = Json::array();
    for (const auto& p : scan.points) pts.push_back(to_json(p, family));
    j["points"] = std::move(pts);
    return j;
}

Json to_json(const HyperbolicSetApprox& h, Family family) {
    Json j;
    j["k"] = h.k;
    j["eta"] = h.eta;
    Json cycles = Json::array();
    for (const auto& c : h.cycles) {
        Json cyc = Json::array();
        for (const auto& p : c) cyc.push_back(to_json(p, family));
        cycles.push_back(std::move(cyc));
    }
    j["cycles"] = std::move(cycles);
    return j;
}

Json to_json(const UniformLandingReport& u) {
    Json j;
    j["n0"] = u.n0 ? Json(*u.n0) : Json(nullptr);
    j["status"] = u.n0 ? "Ok" : "Fail";
    j["window"] = u.window;
    if (!u.diagnostic.empty()) j["diagnostic"] = u.diagnostic;
    return j;
}

Json to_json(const PortraitReport& r, Family family) {
    Json j;
    j["period"] = r.period;
    j["K"] = r.K;
    j["window"] = Json::array({r.window.re_min, r.window.re_max, r.window.im_min, r.window.im_max});
    j["base"] = to_json(r.base);
    j["match_tol"] = r.match_tol;
    j["violation_count"] = r.violations.size();
    j["violations"] = r.violations;
    Json pts = Json::array();
    for (const auto& p : r.points) pts.push_back(to_json(p, family));
    j["points"] = std::move(pts);
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
        Json e;
        e["address"] = format_address(p.address, family);
        e["point"] = p.point;
        e["landing_point"] = to_json(r.points[p.point].point);
        pairs.push_back(std::move(e));
    }
    j["pairs"] = std::move(pairs);
    Json colanding = Json::array();
    for (const auto& c : r.colanding) {
        Json e;
        e["point"] = c.point;
        e["count"] = c.addresses.size();
        Json addrs = Json::array();
        for (const auto& s : c.addresses) addrs.push_back(format_address(s, family));
        e["addresses"] = std::move(addrs);
        colanding.push_back(std::move(e));
    }
    j["colanding"] = std::move(colanding);
    j["unmatched_points"] = r.unmatched_points;
    Json beyond = Json::array();
    for (const auto& b : r.beyond_alphabet) beyond.push_back(Json{{"point", b.point}, {"itinerary", b.itinerary}});
    j["beyond_alphabet"] = std::move(beyond);
    Json ua = Json::array(), lu = Json::array();
    for (const auto& s : r.unmatched_addresses) ua.push_back(format_address(s, family));
    for (const auto& s : r.landed_unscanned) lu.push_back(format_address(s, family));
    j["unmatched_addresses"] = std::move(ua);
    j["landed_unscanned"] = std::move(lu);
    Json lands = Json::array();
    for (const auto& l : r.landings) lands.push_back(landing_json(l.address, l.report, family));
    j["landings"] = std::move(lands);
    j["notes"] = r.notes;
    return j;
}

Json to_json(const CandidateTree& t, Family family) {
    Json j;
    j["target"] = to_json(t.target, family);
    j["delta_ball"] = t.delta_ball;
    j["first_filtered"] = t.first_filtered;
    j["node_count"] = t.node_count;
    Json levels = Json::array();
    for (std::size_t n = 0; n < t.levels.size(); ++n) {
        Json lv;
        lv["depth"] = n + 1;
        lv["radius"] = t.radii[n];
        lv["size"] = t.levels[n].size();
        levels.push_back(std::move(lv));
    }
    j["levels"] = std::move(levels);
    return j;
}

Json error_json(const DynamicsError& e) {
    Json j;
    j["kind"] = to_string(e.kind());
    j["message"] = e.what();
    if (e.depth()) j["depth"] = *e.depth();
    if (e.index()) j["index"] = *e.index();
    return j;
}

std::string orbit_csv(const PullbackOrbit& orbit) {
    std::string out = "n,re,im,gap\n";
    out += "0," + csv_num(orbit.base.real()) + "," + csv_num(orbit.base.imag()) + ",\n";
    for (std::size_t i = 0; i < orbit.points.size(); ++i)
        out += std::to_string(i + 1) + "," + csv_num(orbit.points[i].real()) + "," + csv_num(orbit.points[i].imag()) +
               "," + csv_num(orbit.gaps[i]) + "\n";
    return out;
}

std::string ray_csv(const RayPolyline& ray) {
    std::string out = "t,re,im\n";
    for (std::size_t i = 0; i < ray.vertices.size(); ++i)
        out += csv_num(ray.t_values[i]) + "," + csv_num(ray.vertices[i].real()) + "," +
               csv_num(ray.vertices[i].imag()) + "\n";
    return out;
}

}  // namespace dreadlock
