#include <chrono>
#include <random>

#include "doctest.h"
#include "dreadlock/pullback.hpp"

using namespace dreadlock;

namespace {
// R = 2.5 keeps the real base point 10 inside W_0.
const EntireMap fexp = EntireMap::exponential(-2.0, 2.5);
constexpr double kFix0 = 1.1461932206205825852;
ExternalAddress A(const std::string& s) { return parse_address(s, Family::Exponential); }
}  // namespace

TEST_CASE("pullback points") {
    CHECK(std::abs(pullback_point(fexp, A("(0)"), 10.0, 1) - std::log(12.0)) < 1e-15);
    CHECK(std::abs(pullback_point(fexp, A("(1)"), 10.0, 1) - cplx(std::log(12.0), kTwoPi)) < 1e-14);
    CHECK(std::abs(pullback_point(fexp, A("(0)"), 10.0, 60) - kFix0) < 1e-12);
    CHECK(pullback_point(fexp, A("(0)"), 10.0, 0) == cplx(10.0));
    CHECK_THROWS_AS(pullback_point(fexp, A("(0)"), 1.0, 3), DynamicsError);
}

TEST_CASE("sequence matches direct composition") {
    for (auto text : {"(0,1)", "[2,-1] (3,0,-2)", "[1] (0)"}) {
        auto s = A(text);
        PullbackSequence seq(fexp, s, 10.0);
        for (int n = 1; n <= 25; ++n) CHECK(seq.next() == pullback_point(fexp, s, 10.0, n));
    }
}

TEST_CASE("shift-pullback commutation") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> k(-3, 3), len(1, 3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<DomainLabel> pre(len(rng) - 1), per(len(rng));
        for (auto& x : pre) x = {0, k(rng)};
        for (auto& x : per) x = {0, k(rng)};
        ExternalAddress s(pre, per);
        for (int n = 1; n <= 25; ++n) {
            cplx z = pullback_point(fexp, s, 10.0, n);
            cplx w = pullback_point(fexp, s.shift(), 10.0, n - 1);
            CHECK(std::abs(*fexp.eval(z) - w) <= 1e-9);
        }
    }
}

TEST_CASE("addresses agreeing to depth n give identical points") {
    auto s1 = A("[0,1,2] (0)"), s2 = A("[0,1,2] (3)");
    CHECK(pullback_point(fexp, s1, 10.0, 3) == pullback_point(fexp, s2, 10.0, 3));
}

TEST_CASE("landing at fixed points of e^z - 2") {
    const cplx expected[] = {{3.0346885232781815296, -20.175805735222703493},
                             {2.6797741925122729693, -13.810452993120175823},
                             {2.131075457666587278, -7.3414350921977779939},
                             {kFix0, 0.0},
                             {2.131075457666587278, 7.3414350921977779939},
                             {2.6797741925122729693, 13.810452993120175823},
                             {3.0346885232781815296, 20.175805735222703493}};
    for (int k = -3; k <= 3; ++k) {
        auto rep = land(fexp, ExternalAddress::periodic({{0, k}}), 10.0);
        REQUIRE(rep.status == LandingReport::Status::Landed);
        CHECK(std::abs(rep.landing_point - expected[k + 3]) < 1e-12);
        CHECK(rep.period == 1);
        CHECK(rep.residual <= 1e-8);
        CHECK(std::abs(rep.multiplier - (rep.landing_point + 2.0)) < 1e-10);
        CHECK(rep.classification.kind == Classification::Kind::Repelling);
    }
}

TEST_CASE("period-2 and preperiodic landing") {
    auto rep = land(fexp, A("(0,1)"), 10.0);
    REQUIRE(rep.status == LandingReport::Status::Landed);
    CHECK(std::abs(rep.landing_point - cplx(2.0000236070207725789, 1.0892888760277611471)) < 1e-11);
    CHECK(rep.period == 2);
    auto partner = land(fexp, A("(1,0)"), 10.0);
    REQUIRE(partner.status == LandingReport::Status::Landed);
    CHECK(std::abs(partner.landing_point - *fexp.eval(rep.landing_point)) < 1e-9);

    // The preimage of the real fixed point in strip 1 is log(z0 + 2) + 2 pi i = z0 + 2 pi i.
    auto pre = land(fexp, A("[1] (0)"), 10.0);
    REQUIRE(pre.status == LandingReport::Status::Landed);
    CHECK(std::abs(pre.landing_point - cplx(kFix0, kTwoPi)) < 1e-11);
    CHECK(pre.period == 1);
}

TEST_CASE("parabolic landing of e^z - 1") {
    auto m = EntireMap::exponential(-1.0, 5.0);
    LandOptions opts;
    opts.tol = 1e-6;
    opts.n_max = 1000000;
    auto t0 = std::chrono::steady_clock::now();
    auto rep = land(m, A("(0)"), 10.0, opts);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(rep.status == LandingReport::Status::Landed);
    CHECK(std::abs(rep.landing_point) < 1e-4);
    CHECK(rep.classification.kind == Classification::Kind::ParabolicMultiplier1);
    CHECK(seconds < 30.0);
}

TEST_CASE("undecided and diverged") {
    LandOptions opts;
    opts.n_max = 3;
    opts.slow_mode = false;
    CHECK(land(fexp, A("(0)"), 10.0, opts).status == LandingReport::Status::Undecided);
    opts = {};
    opts.r_div = 5.0;
    CHECK(land(fexp, A("(3)"), 10.0, opts).status == LandingReport::Status::Diverged);
}

TEST_CASE("ray tracing") {
    const auto m = EntireMap::exponential(-2.0, 10.0);
    auto s = A("(0)");
    const cplx base = default_trace_base(m, {{0, 0}});
    auto ray = trace_ray(m, s, base, 20, 8);
    REQUIRE(ray.vertices.size() == 20 * 8 + 1);
    CHECK(ray.t_values.front() == -20.0);
    CHECK(ray.t_values.back() == 0.0);
    for (std::size_t i = 1; i < ray.t_values.size(); ++i) CHECK(ray.t_values[i] > ray.t_values[i - 1]);
    for (std::size_t i = 0; i < ray.vertices.size(); ++i)
        if (ray.t_values[i] <= -10.0) CHECK(std::abs(ray.vertices[i].imag()) < 1e-6);
    CHECK(std::abs(ray.vertices.front() - pullback_point(m, s, base, 20)) < 1e-12);

    auto s2 = A("(0,1)");
    const cplx b2 = default_trace_base(m, {{0, 0}, {0, 1}});
    auto r2 = trace_ray(m, s2, b2, 10, 4);
    auto r2s = trace_ray(m, s2.shift(), b2, 10, 4);
    // f(gamma_s(t)) = gamma_{shift s}(t + 1): vertex i of r2 maps to vertex i + 4 of r2s.
    for (std::size_t i = 0; i + 4 < r2.vertices.size(); ++i) {
        if (r2.t_values[i] > -1.0) break;
        CHECK(std::abs(*m.eval(r2.vertices[i]) - r2s.vertices[i + 4]) < 1e-6 * std::max(1.0, std::abs(r2s.vertices[i + 4])));
    }
    CHECK_THROWS_AS(trace_ray(m, s, 30.0, 5, 4), DynamicsError);
}

TEST_CASE("segment check") {
    const auto m = EntireMap::exponential(-2.0, 10.0);
    CHECK(segment_in_W0(m, cplx(0, 20), cplx(0, 30)));
    CHECK_FALSE(segment_in_W0(m, cplx(-20, 20), cplx(-20, -20)));
    CHECK(segment_in_W0(m, cplx(20, 20), cplx(20, -20)));
    CHECK_FALSE(segment_in_W0(m, cplx(-12, 1), cplx(12, 1)));
    CHECK(segment_in_W0(m, cplx(20, 20), cplx(40, 5)));
}

TEST_CASE("escape addresses") {
    const auto m = EntireMap::exponential(-2.0, 10.0);
    auto a = escape_address(m, 100.0, 3);
    CHECK(a.entries() == std::vector<DomainLabel>{{0, 0}, {0, 0}, {0, 0}});
    CHECK(escape_address(m, cplx(100.0, kTwoPi), 1).entries() == std::vector<DomainLabel>{{0, 1}});
    CHECK_THROWS_AS(escape_address(m, 1.0, 2), DynamicsError);
    CHECK_THROWS_AS(escape_address(m, cplx(100.0, 1.0), 3), DynamicsError);

    auto s = A("(0,1)");
    cplx z = pullback_point(fexp, s, 1e4, 6);
    CHECK(escape_address(fexp, z, 6, AddressMode::Continued) == s.prefix(6));
}

TEST_CASE("gap decay") {
    auto hyper = pullback_orbit(fexp, A("(0)"), 10.0, 40);
    auto g = gap_decay_check(hyper);
    CHECK(g.geometric);
    CHECK(g.rate == doctest::Approx(1.0 / (kFix0 + 2.0)).epsilon(0.02));

    auto m = EntireMap::exponential(-1.0, 5.0);
    auto para = pullback_orbit(m, A("(0)"), 10.0, 2000);
    CHECK_FALSE(gap_decay_check(para).geometric);

    PullbackOrbit flat{A("(0)"), kFix0, std::vector<cplx>(10, kFix0), std::vector<double>(10, 0.0)};
    CHECK(gap_decay_check(flat).geometric);
}
