#include "dreadlock/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "toml.hpp"

#include "dreadlock/report.hpp"

namespace dreadlock {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num_token(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Entries = std::map<std::string, std::vector<std::string>>;

std::string normalize_key(std::string key) {
    for (auto& c : key)
        if (c == '_') c = '-';
    return key;
}

// Scalar -> token text; arrays of numbers are joined with commas, arrays of
// strings become repeated options.
void add_json_entry(Entries& out, const std::string& key, const Json& v) {
    auto scalar = [&key](const Json& x) -> std::string {
        if (x.is_string()) return x.get<std::string>();
        if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
        if (x.is_number_integer()) return std::to_string(x.get<long long>());
        if (x.is_number()) return num_token(x.get<double>());
        throw UsageError("unsupported config value for '" + key + "'");
    };
    auto& slot = out[normalize_key(key)];
    slot.clear();
    if (v.is_array()) {
        const bool numeric = !v.empty() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
        if (numeric) {
            std::string joined;
            for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
            slot.push_back(joined);
        } else {
            for (const auto& e : v) slot.push_back(scalar(e));
        }
    } else {
        slot.push_back(scalar(v));
    }
}

Json toml_to_json(const toml::node& n) {
    if (auto t = n.as_table()) {
        Json j = Json::object();
        for (auto&& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
        return j;
    }
    if (auto a = n.as_array()) {
        Json j = Json::array();
        for (auto&& e : *a) j.push_back(toml_to_json(e));
        return j;
    }
    if (auto s = n.value<std::string>(); s && n.is_string()) return *s;
    if (n.is_boolean()) return *n.value<bool>();
    if (n.is_integer()) return *n.value<long long>();
    if (n.is_floating_point()) return *n.value<double>();
    throw UsageError("unsupported TOML value type");
}

Json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = path.size() >= 5 ? path.substr(path.size() - 5) == ".json"
                                          : (first != std::string::npos && text[first] == '{');
    try {
        if (is_json || (first != std::string::npos && text[first] == '{')) return Json::parse(text);
        return toml_to_json(toml::parse(text, path));
    } catch (const std::exception& e) {
        throw UsageError("cannot parse config '" + path + "': " + e.what());
    }
}

std::string option_name(const std::string& token) {
    if (token.rfind("--", 0) != 0) return {};
    auto eq = token.find('=');
    return token.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
}

cplx parse_point(const std::string& text) {
    double re = 0, im = 0;
    char tail = 0;
    const int n = std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &tail);
    if (n == 1) {
        if (std::sscanf(text.c_str(), "%lf%c", &re, &tail) != 1) throw UsageError("bad point '" + text + "'");
        return {re, 0.0};
    }
    if (n != 2) throw UsageError("bad point '" + text + "' (expected re,im)");
    return {re, im};
}

Window parse_window(const std::string& text) {
    Window w;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%c", &w.re_min, &w.re_max, &w.im_min, &w.im_max, &tail) != 4)
        throw UsageError("bad window '" + text + "' (expected re_min,re_max,im_min,im_max)");
    if (w.degenerate()) throw UsageError("degenerate window '" + text + "'");
    return w;
}

void require_positive(double v, const char* what) {
    if (!(v > 0)) throw UsageError(std::string(what) + " must be positive");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DynamicsError(ErrorKind::IoError, "cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw DynamicsError(ErrorKind::IoError, "write to '" + path + "' failed");
}

struct Common {
    std::string map = "";
    double radius = 0;
    double cut = 0;
    bool cut_given = false;
    std::string config;
    std::string out;
    int threads = 0;
    std::string base;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--map", c.map, "map spec: exp:<re>[,<im>] or cos:<a_re>,<a_im>,<b_re>,<b_im>")->required();
    app->add_option("--radius", c.radius, "disc radius R (default: chosen by normalization)");
    app->add_option("--cut", c.cut, "cut ray angle");
    app->add_option("--config", c.config, "TOML or JSON config file; flags override it");
    app->add_option("--out", c.out, "write the JSON report here instead of stdout");
    app->add_option("--threads", c.threads, "worker threads (0 = hardware; capped by DREADLOCK_THREADS)");
    app->add_option("--base", c.base, "base point re,im (default depends on the command)");
}

EntireMap setup_map(const Common& c, const CLI::App* app) {
    MapSpec spec = parse_map_spec(c.map);
    if (app->count("--radius")) {
        require_positive(c.radius, "--radius");
        spec.disc_radius = c.radius;
    }
    if (app->count("--cut")) spec.cut_angle = c.cut;
    return build_map(spec);
}

std::vector<ExternalAddress> parse_addresses(const std::vector<std::string>& texts, Family fam) {
    std::vector<ExternalAddress> out;
    for (const auto& t : texts) out.push_back(parse_address(t, fam));
    return out;
}

Json header(const std::string& command, const EntireMap& m) {
    Json j;
    j["command"] = command;
    j["map"] = map_json(m);
    return j;
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path, const std::string& subcommand,
                                       const std::function<bool(const std::string&)>& accepts) {
    const Json cfg = load_config(path);
    if (!cfg.is_object()) throw UsageError("config must be a table/object");
    Entries entries;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        if (it.value().is_object() || it.key() == "command") continue;
        if (accepts && !accepts(normalize_key(it.key()))) continue;  // shared key meant for another command
        add_json_entry(entries, it.key(), it.value());
    }
    if (cfg.contains(subcommand) && cfg[subcommand].is_object())
        for (auto it = cfg[subcommand].begin(); it != cfg[subcommand].end(); ++it)
            add_json_entry(entries, it.key(), it.value());
    std::vector<std::string> tokens;
    for (const auto& [key, values] : entries) {
        for (const auto& v : values) {
            if (v == "false") continue;
            tokens.push_back(v == "true" ? "--" + key : "--" + key + "=" + v);
        }
    }
    return tokens;
}

int run_command(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical landing of periodic dreadlocks for exp and cosine maps", "dreadlock"};
    app.require_subcommand(1);

    Common c;
    // trace-ray / land
    std::vector<std::string> addresses;
    int n_pull = 30, samples = 16;
    std::string csv;
    LandOptions lo;
    bool no_slow = false;
    std::string orbit_csv_path;
    // scan / portrait / hyperbolic / render
    int period = 1;
    std::int64_t K = 3;
    std::string window_text = "-5,5,-8,8";
    std::string grid_text = "64,64";
    double scan_tol = 1e-12;
    double match_tol = 1e-7;
    double seeds_per_unit = 8.0;
    bool stability = false;
    int k_iter = 1;
    double eps = 1e-3;
    int n0_max = 60;
    RenderSpec rs;
    std::string render_window = "-5,5,-5,5";
    std::string image_path, svg_path;
    int mark_period = 0;

    auto* trace = app.add_subcommand("trace-ray", "trace ray polylines for addresses");
    add_common(trace, c);
    trace->add_option("--address", addresses, "external address, e.g. \"(0)\" or \"[1] (0,1)\"")->required();
    trace->add_option("--n-pull", n_pull, "number of pullback pieces");
    trace->add_option("--samples", samples, "samples per unit of potential time");
    trace->add_option("--csv", csv, "CSV (t,re,im) of the first ray");

    auto* landc = app.add_subcommand("land", "pull back along addresses and locate landing points");
    add_common(landc, c);
    landc->add_option("--address", addresses, "external address")->required();
    landc->add_option("--tol", lo.tol, "gap tolerance");
    landc->add_option("--n-max", lo.n_max, "pullback steps before slow mode");
    landc->add_option("--slow-n-max", lo.slow_n_max, "pullback steps in slow mode");
    landc->add_flag("--no-slow", no_slow, "disable slow mode");
    landc->add_option("--residual-tol", lo.residual_tol, "Newton residual tolerance");
    landc->add_option("--r-div", lo.r_div, "divergence radius");
    landc->add_option("--orbit-csv", orbit_csv_path, "CSV (n,re,im,gap) of the first address's pullback orbit");

    auto* scan = app.add_subcommand("scan-periodic", "Newton scan for periodic points in a window");
    add_common(scan, c);
    scan->add_option("--period", period, "period p");
    scan->add_option("--window", window_text, "re_min,re_max,im_min,im_max (use --window=...)");
    scan->add_option("--grid", grid_text, "nx,ny seeds");
    scan->add_option("--tol", scan_tol, "Newton residual tolerance");

    auto* portrait = app.add_subcommand("portrait", "verify both directions of the landing theorem");
    add_common(portrait, c);
    portrait->add_option("--period", period, "period p");
    portrait->add_option("--K", K, "alphabet bound |k| <= K");
    portrait->add_option("--window", window_text, "re_min,re_max,im_min,im_max (use --window=...)");
    portrait->add_option("--seeds-per-unit", seeds_per_unit, "scan grid density");
    portrait->add_option("--match-tol", match_tol, "landing point match tolerance");
    portrait->add_option("--tol", lo.tol, "gap tolerance");
    portrait->add_option("--n-max", lo.n_max, "pullback steps before slow mode");
    portrait->add_flag("--stability", stability, "rerun with K+1 and flag growing co-landing counts");

    auto* hyper = app.add_subcommand("hyperbolic", "hyperbolic set of repelling cycles and uniform landing");
    add_common(hyper, c);
    hyper->add_option("--period", period, "period p of the scanned cycles");
    hyper->add_option("--window", window_text, "re_min,re_max,im_min,im_max (use --window=...)");
    hyper->add_option("--grid", grid_text, "nx,ny seeds");
    hyper->add_option("--k", k_iter, "iterate for the expansion witness");
    hyper->add_option("--address", addresses, "addresses for the uniform landing check");
    hyper->add_option("--eps", eps, "uniform landing distance");
    hyper->add_option("--n0-max", n0_max, "largest n0 tried");

    auto* rend = app.add_subcommand("render", "escape-time PPM with ray overlays");
    add_common(rend, c);
    rend->add_option("--window", render_window, "re_min,re_max,im_min,im_max (use --window=...)");
    rend->add_option("--width", rs.width, "pixels");
    rend->add_option("--height", rs.height, "pixels");
    rend->add_option("--max-iter", rs.max_iter, "iteration cap");
    rend->add_option("--escape-radius", rs.escape_radius, "escape radius");
    rend->add_option("--max-side", rs.max_side, "resolution cap per side");
    rend->add_option("--ray", addresses, "address of a ray to overlay");
    rend->add_option("--n-pull", n_pull, "pullback pieces per ray");
    rend->add_option("--samples", samples, "samples per unit of potential time");
    rend->add_option("--mark-period", mark_period, "mark periodic points of this period (0 = none)");
    rend->add_option("--image", image_path, "PPM output path")->required();
    rend->add_option("--svg", svg_path, "SVG overlay output path");

    // Config tokens first, minus every option also given on the command line.
    std::vector<std::string> args = args_in;
    try {
        if (!args.empty()) {
            std::string cfg;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
                else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
            }
            if (!cfg.empty()) {
                std::set<std::string> given;
                for (std::size_t i = 1; i < args.size(); ++i)
                    if (auto n = option_name(args[i]); !n.empty()) given.insert(n);
                std::vector<std::string> merged{args[0]};
                const CLI::App* sub = app.get_subcommand_no_throw(args[0]);
                auto accepts = [sub](const std::string& key) {
                    return sub && sub->get_option_no_throw("--" + key) != nullptr;
                };
                for (auto& t : config_tokens(cfg, args[0], accepts))
                    if (!given.count(option_name(t))) merged.push_back(t);
                merged.insert(merged.end(), args.begin() + 1, args.end());
                args = std::move(merged);
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (!app.get_subcommands().empty())
            err << app.get_subcommands().front()->help();
        else
            err << app.help();
        return kExitUsage;
    }
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    auto emit = [&](const Json& report) {
        const std::string text = dump_json(report);
        if (c.out.empty()) out << text;
        else write_text(c.out, text);
    };

    // Setup: everything that can fail because of bad input is a usage error.
    std::optional<EntireMap> map;
    std::vector<ExternalAddress> parsed;
    Window window;
    try {
        map = setup_map(c, sub);
        parsed = parse_addresses(addresses, map->family());
        if (command == "render") window = parse_window(render_window);
        else window = parse_window(window_text);
        if (no_slow) lo.slow_mode = false;
        require_positive(lo.tol, "--tol");
        require_positive(lo.residual_tol, "--residual-tol");
        require_positive(scan_tol, "--tol");
        require_positive(match_tol, "--match-tol");
        require_positive(eps, "--eps");
        require_positive(seeds_per_unit, "--seeds-per-unit");
        if (n_pull < 1 || samples < 1 || period < 1 || K < 1 || k_iter < 1 || lo.n_max < 1 || n0_max < 1)
            throw UsageError("counts must be >= 1");
        if (command == "trace-ray" && !csv.empty() && parsed.size() != 1) throw UsageError("--csv needs one address");
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DynamicsError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const EntireMap& m = *map;
    const Family fam = m.family();

    auto base_point = [&](cplx fallback) {
        if (c.base.empty()) return fallback;
        cplx b = parse_point(c.base);
        if (!m.in_W0(b)) throw UsageError("--base must lie in W_0 (outside the disc and off the cut ray)");
        return b;
    };
    auto grid = [&] {
        int nx = 0, ny = 0;
        char tail = 0;
        if (std::sscanf(grid_text.c_str(), "%d,%d%c", &nx, &ny, &tail) != 2 || nx < 1 || ny < 1)
            throw UsageError("bad grid '" + grid_text + "' (expected nx,ny)");
        return std::pair{nx, ny};
    };

    try {
        Json report = header(command, m);
        bool ok = true;
        if (command == "trace-ray") {
            std::set<DomainLabel> labels;
            for (const auto& s : parsed)
                for (int n = 0; n < n_pull; ++n) labels.insert(s.entry(static_cast<std::size_t>(n)));
            const cplx base = base_point(default_trace_base(m, {labels.begin(), labels.end()}));
            report["base"] = to_json(base);
            report["n_pull"] = n_pull;
            report["samples_per_unit"] = samples;
            Json rays = Json::array();
            for (const auto& s : parsed) {
                auto ray = trace_ray(m, s, base, n_pull, samples);
                if (!csv.empty()) write_text(csv, ray_csv(ray));
                rays.push_back(to_json(ray, fam));
            }
            report["rays"] = std::move(rays);
        } else if (command == "land") {
            const cplx base = base_point(default_base(m));
            report["base"] = to_json(base);
            report["tol"] = lo.tol;
            Json results = Json::array();
            for (const auto& s : parsed) {
                auto r = land(m, s, base, lo);
                ok = ok && r.status == LandingReport::Status::Landed;
                results.push_back(landing_json(s, r, fam));
            }
            report["results"] = std::move(results);
            if (!orbit_csv_path.empty() && !parsed.empty()) {
                const int steps = std::max(1, report["results"][0]["steps"].get<int>());
                write_text(orbit_csv_path, orbit_csv(pullback_orbit(m, parsed.front(), base, steps)));
            }
        } else if (command == "scan-periodic") {
            auto [nx, ny] = grid();
            auto res = scan_periodic(m, period, window, nx, ny, scan_tol, c.threads);
            report["period"] = period;
            report["window"] = Json::array({window.re_min, window.re_max, window.im_min, window.im_max});
            report["grid"] = Json::array({nx, ny});
            merge_into(report, to_json(res, fam));
        } else if (command == "portrait") {
            PortraitOptions po;
            po.land = lo;
            po.match_tol = match_tol;
            po.seeds_per_unit = seeds_per_unit;
            po.threads = c.threads;
            const cplx base = base_point(default_base(m));
            auto rep = verify_landing_theorem(m, period, K, window, base, po);
            ok = rep.ok();
            merge_into(report, to_json(rep, fam));
            if (stability) {
                auto bigger = verify_landing_theorem(m, period, K + 1, window, base, po);
                Json grown = Json::array();
                for (const auto& g : colanding_growth(rep, bigger))
                    grown.push_back(Json{{"point", to_json(g.point)}, {"count", g.count}});
                report["stability"] = Json{{"K_plus_one", K + 1}, {"grown", grown}};
                ok = ok && grown.empty();
            }
        } else if (command == "hyperbolic") {
            auto [nx, ny] = grid();
            auto res = scan_periodic(m, period, window, nx, ny, scan_tol, c.threads);
            std::vector<PeriodicPoint> repelling;
            for (const auto& p : res.points)
                if (p.classification.is_repelling()) repelling.push_back(p);
            auto h = build_hyperbolic_set(m, repelling, k_iter);
            report["hyperbolic_set"] = to_json(h, fam);
            if (!parsed.empty()) {
                const cplx base = base_point(default_base(m));
                auto u = uniform_landing_check(m, h, parsed, base, eps, n0_max);
                ok = u.n0.has_value();
                report["uniform_landing"] = to_json(u);
            }
        } else if (command == "render") {
            rs.window = window;
            if (!parsed.empty()) {
                std::set<DomainLabel> labels;
                for (const auto& s : parsed)
                    for (int n = 0; n < n_pull; ++n) labels.insert(s.entry(static_cast<std::size_t>(n)));
                const cplx base = base_point(default_trace_base(m, {labels.begin(), labels.end()}));
                for (const auto& s : parsed) rs.overlays.push_back(trace_ray(m, s, base, n_pull, samples));
            }
            if (mark_period > 0) {
                const int nx = std::max(8, rs.width / 8), ny = std::max(8, rs.height / 8);
                rs.marks = scan_periodic(m, mark_period, window, nx, ny, scan_tol, c.threads).points;
            }
            auto img = render(m, rs, c.threads);
            write_ppm(img, image_path);
            if (!svg_path.empty()) write_svg(rs, svg_path);
            report["image"] = image_path;
            if (!svg_path.empty()) report["svg"] = svg_path;
            report["width"] = rs.width;
            report["height"] = rs.height;
            report["window"] = Json::array({window.re_min, window.re_max, window.im_min, window.im_max});
            report["max_iter"] = rs.max_iter;
            report["escape_radius"] = rs.escape_radius;
            Json ov = Json::array();
            for (const auto& r : rs.overlays) ov.push_back(format_address(r.address, fam));
            report["overlays"] = std::move(ov);
            Json marks = Json::array();
            for (const auto& p : rs.marks) marks.push_back(to_json(p, fam));
            report["marks"] = std::move(marks);
        }
        report["ok"] = ok;
        emit(report);
        return ok ? kExitOk : kExitNumeric;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DynamicsError& e) {
        Json diag;
        diag["command"] = command;
        diag["error"] = error_json(e);
        err << dump_json(diag);
        return kExitNumeric;
    }
}

}  // namespace dreadlock
