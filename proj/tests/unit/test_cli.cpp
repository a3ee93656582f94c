#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dreadlock/cli.hpp"
#include "dreadlock/report.hpp"

using namespace dreadlock;

namespace {
struct Run {
    int code;
    std::string out, err;
};
Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}
std::string temp_path(const std::string& name) { return std::string(DREADLOCK_TEST_TMP) + "/" + name; }
}  // namespace

TEST_CASE("land reports the real fixed point") {
    auto r = run({"land", "--map", "exp:-2", "--address", "(0)", "--tol", "1e-10"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["command"] == "land");
    CHECK(j["results"][0]["classification"] == "Repelling");
    CHECK(j["results"][0]["landing_point"][0].get<double>() == doctest::Approx(1.146193).epsilon(1e-6));
    CHECK(j["results"][0]["landing_point"][1].get<double>() == 0.0);
}

TEST_CASE("duplicate addresses give identical records") {
    auto r = run({"land", "--map", "exp:-2", "--address", "(0)", "--address", "(0)"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["results"][0] == j["results"][1]);
}

TEST_CASE("portrait exits 0 with zero violations") {
    auto r = run({"portrait", "--map", "exp:-2", "--period", "1", "--K", "3"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["violation_count"] == 0);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"land", "--map", "exp:-2"}).code == 2);
    CHECK(run({"land", "--map", "sin:1", "--address", "(0)"}).code == 2);
    CHECK(run({"land", "--map", "exp:-2", "--address", "(0"}).code == 2);
    CHECK(run({"scan-periodic", "--map", "exp:-2", "--window=1,1,0,1"}).code == 2);
    CHECK(run({"land", "--map", "exp:-2", "--address", "(0)", "--tol", "-1"}).code == 2);
    CHECK(run({"land", "--map", "exp:-2", "--radius", "1", "--address", "(0)"}).code == 2);
    CHECK(run({"land", "--help"}).code == 0);
}

TEST_CASE("numeric failures exit 1 with a diagnostic") {
    auto r = run({"trace-ray", "--map", "exp:-2", "--address", "(0)", "--base", "30"});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.err)["error"]["kind"] == "ArcLeavesW0");
    auto u = run({"land", "--map", "exp:-2", "--address", "(0)", "--n-max", "3", "--no-slow"});
    CHECK(u.code == 1);
    CHECK(Json::parse(u.out)["results"][0]["status"] == "Undecided");
}

TEST_CASE("TOML and JSON configs, flags override") {
    const auto toml = temp_path("cfg.toml");
    {
        std::ofstream f(toml);
        f << "map = \"exp:-2\"\naddress = [\"(1)\"]\n[land]\ntol = 1e-9\n";
    }
    auto r = run({"land", "--config", toml});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["results"][0]["address"] == "(1)");
    CHECK(j["tol"].get<double>() == 1e-9);
    auto o = run({"land", "--config", toml, "--address", "(0)"});
    REQUIRE(o.code == 0);
    CHECK(Json::parse(o.out)["results"][0]["address"] == "(0)");

    const auto json = temp_path("cfg.json");
    {
        std::ofstream f(json);
        f << R"({"map": "exp:-2", "period": 1, "window": [-5, 5, -8, 8], "grid": "20,20"})";
    }
    auto s = run({"scan-periodic", "--config", json});
    REQUIRE(s.code == 0);
    CHECK(Json::parse(s.out)["points"].size() == 4);
    CHECK(run({"land", "--config", temp_path("missing.toml")}).code == 2);
}

TEST_CASE("output files") {
    const auto out = temp_path("land.json");
    const auto csv = temp_path("orbit.csv");
    auto r = run({"land", "--map", "exp:-2", "--address", "(0)", "--out", out, "--orbit-csv", csv});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out), g(csv);
    CHECK(f.good());
    std::string header;
    std::getline(g, header);
    CHECK(header == "n,re,im,gap");

    const auto img = temp_path("r.ppm");
    auto rr = run({"render", "--map", "exp:-2", "--width", "16", "--height", "16", "--ray", "(0)", "--image", img});
    CHECK(rr.code == 0);
    CHECK(run({"render", "--map", "exp:-2", "--width", "5000", "--image", img}).code == 1);
}

TEST_CASE("hyperbolic command") {
    auto r = run({"hyperbolic", "--map", "exp:-2", "--window=-5,5,-8,8", "--grid", "20,30", "--address", "(0)",
                  "--address", "(1)"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["hyperbolic_set"]["eta"].get<double>() > 1.0);
    CHECK(j["uniform_landing"]["status"] == "Ok");
}

TEST_CASE("one config file serves several subcommands") {
    const auto path = temp_path("shared.toml");
    {
        std::ofstream f(path);
        f << "map = \"exp:-2\"\nwindow = [-5, 5, -8, 8]\n[portrait]\nperiod = 1\nK = 2\n[land]\naddress = [\"(0)\"]\n";
    }
    auto l = run({"land", "--config", path});
    CHECK(l.code == 0);
    auto p = run({"portrait", "--config", path});
    REQUIRE(p.code == 0);
    CHECK(Json::parse(p.out)["K"] == 2);

    const auto bad = temp_path("bad.toml");
    {
        std::ofstream f(bad);
        f << "map = \"exp:-2\"\n[land]\naddress = [\"(0)\"]\nwindow = [-5, 5, -8, 8]\n";
    }
    CHECK(run({"land", "--config", bad}).code == 2);
}
