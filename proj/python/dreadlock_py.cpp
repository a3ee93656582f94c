#include <set>
#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dreadlock/cli.hpp"
#include "dreadlock/portrait.hpp"
#include "dreadlock/render.hpp"
#include "dreadlock/report.hpp"

namespace py = pybind11;
using namespace dreadlock;

namespace {

std::string dumps(const Json& j) { return dump_json(j, 0); }

Window window_of(const std::vector<double>& w) {
    if (w.size() != 4) throw py::value_error("window needs 4 numbers: re_min, re_max, im_min, im_max");
    return Window{w[0], w[1], w[2], w[3]};
}

cplx trace_base(const EntireMap& m, const ExternalAddress& s, int n_pull) {
    std::set<DomainLabel> labels;
    for (int n = 0; n < n_pull; ++n) labels.insert(s.entry(static_cast<std::size_t>(n)));
    return default_trace_base(m, {labels.begin(), labels.end()});
}

cplx base_or_default(const EntireMap& m, std::optional<cplx> base) { return base ? *base : default_base(m); }

}  // namespace

PYBIND11_MODULE(_dreadlock, mod) {
    mod.doc() = "Pullback, landing and portrait computations for exp and cos families";

    // The message is the JSON diagnostic; the Python wrapper decodes it.
    static py::exception<DynamicsError> exc(mod, "DynamicsError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DynamicsError& e) {
            py::set_error(exc, dumps(error_json(e)).c_str());
        }
    });

    py::class_<EntireMap>(mod, "EntireMap")
        .def_static("parse", [](const std::string& spec) { return build_map(parse_map_spec(spec)); },
                    py::arg("spec"))
        .def_static("exponential", &EntireMap::exponential, py::arg("a"), py::arg("radius"),
                    py::arg("cut") = kPi)
        .def_static("cosine", &EntireMap::cosine, py::arg("a"), py::arg("b"), py::arg("radius"),
                    py::arg("cut") = kPi / 2)
        .def_property_readonly("id", &EntireMap::id)
        .def("eval", &EntireMap::eval)
        .def("deriv", &EntireMap::deriv)
        .def("in_W0", &EntireMap::in_W0)
        .def("singular_values", &EntireMap::singular_values)
        .def("inverse_branch",
             [](const EntireMap& m, const std::string& label, cplx w) {
                 return m.inverse_branch(parse_label(label, m.family()), w);
             })
        .def("to_json", [](const EntireMap& m) { return dumps(map_json(m)); })
        .def("__repr__", [](const EntireMap& m) { return "<EntireMap " + m.id() + ">"; });

    mod.def("default_base", &default_base);

    mod.def(
        "pullback_point",
        [](const EntireMap& m, const std::string& address, std::optional<cplx> base, int n) {
            return pullback_point(m, parse_address(address, m.family()), base_or_default(m, base), n);
        },
        py::arg("map"), py::arg("address"), py::arg("base") = py::none(), py::arg("n") = 1);

    mod.def(
        "land",
        [](const EntireMap& m, const std::string& address, std::optional<cplx> base, double tol, int n_max) {
            LandOptions opts;
            opts.tol = tol;
            opts.n_max = n_max;
            auto s = parse_address(address, m.family());
            LandingReport r;
            {
                py::gil_scoped_release release;
                r = land(m, s, base_or_default(m, base), opts);
            }
            return dumps(landing_json(s, r, m.family()));
        },
        py::arg("map"), py::arg("address"), py::arg("base") = py::none(), py::arg("tol") = 1e-10,
        py::arg("n_max") = 10000);

    mod.def(
        "trace_ray",
        [](const EntireMap& m, const std::string& address, int n_pull, int samples, std::optional<cplx> base) {
            auto s = parse_address(address, m.family());
            cplx b = base ? *base : trace_base(m, s, n_pull);
            return dumps(to_json(trace_ray(m, s, b, n_pull, samples), m.family()));
        },
        py::arg("map"), py::arg("address"), py::arg("n_pull") = 20, py::arg("samples") = 8,
        py::arg("base") = py::none());

    mod.def(
        "scan_periodic",
        [](const EntireMap& m, int p, const std::vector<double>& window, int nx, int ny, double tol, int threads) {
            ScanResult r;
            {
                py::gil_scoped_release release;
                r = scan_periodic(m, p, window_of(window), nx, ny, tol, threads);
            }
            return dumps(to_json(r, m.family()));
        },
        py::arg("map"), py::arg("period"), py::arg("window"), py::arg("nx") = 64, py::arg("ny") = 64,
        py::arg("tol") = 1e-12, py::arg("threads") = 0);

    mod.def(
        "portrait",
        [](const EntireMap& m, int p, std::int64_t K, const std::vector<double>& window, int threads) {
            PortraitOptions opts;
            opts.threads = threads;
            PortraitReport r;
            {
                py::gil_scoped_release release;
                r = verify_landing_theorem(m, p, K, window_of(window), default_base(m), opts);
            }
            Json j;
            j["map"] = map_json(m);
            merge_into(j, to_json(r, m.family()));
            return dumps(j);
        },
        py::arg("map"), py::arg("period"), py::arg("K"), py::arg("window"), py::arg("threads") = 0);

    mod.def(
        "render_ppm",
        [](const EntireMap& m, const std::vector<double>& window, int width, int height,
           const std::vector<std::string>& rays, int threads) {
            RenderSpec spec;
            spec.window = window_of(window);
            spec.width = width;
            spec.height = height;
            for (const auto& text : rays) {
                auto s = parse_address(text, m.family());
                spec.overlays.push_back(trace_ray(m, s, trace_base(m, s, 20), 20, 8));
            }
            std::string bytes;
            {
                py::gil_scoped_release release;
                bytes = ppm_bytes(render(m, spec, threads));
            }
            return py::bytes(bytes);
        },
        py::arg("map"), py::arg("window"), py::arg("width"), py::arg("height"),
        py::arg("rays") = std::vector<std::string>{}, py::arg("threads") = 0);

    mod.def(
        "run_command",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_command(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI subcommand; returns (exit_code, stdout, stderr).");
}
