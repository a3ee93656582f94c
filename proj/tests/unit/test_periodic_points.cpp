#include "doctest.h"
#include "dreadlock/periodic_points.hpp"

using namespace dreadlock;
using K = Classification::Kind;

namespace {
const EntireMap fexp = EntireMap::exponential(-2.0, 10.0);
constexpr double kFix0 = 1.1461932206205825852;
constexpr double kAttr = -1.8414056604369606378;
const cplx kFix1{2.131075457666587278, 7.3414350921977779939};
}  // namespace

TEST_CASE("multiplier classification") {
    CHECK(classify_multiplier(3.146).kind == K::Repelling);
    CHECK(classify_multiplier(1.0 + 1e-8).kind == K::ParabolicMultiplier1);
    auto minus_one = classify_multiplier(-1.0);
    CHECK(minus_one.kind == K::ParabolicRootOfUnity);
    CHECK(minus_one.q == 2);
    CHECK(classify_multiplier(cplx(0.0, 1.0)).q == 4);
    CHECK(classify_multiplier(std::polar(1.0, kTwoPi / 12)).q == 12);
    CHECK(classify_multiplier(std::polar(1.0, kTwoPi / 13)).kind == K::Indifferent);
    CHECK(classify_multiplier(0.5).kind == K::Attracting);
    CHECK(classify_multiplier(std::polar(1.0, 1.0)).kind == K::Indifferent);
    CHECK(classify_multiplier(cplx(INFINITY, 0)).kind == K::Unclassified);
    CHECK(to_string(minus_one) == "ParabolicRootOfUnity(2)");
}

TEST_CASE("Newton on fixed points of e^z - 2") {
    auto r = newton_periodic(fexp, 1, 1.0, 1e-12, 100);
    auto* pt = std::get_if<PeriodicPoint>(&r);
    REQUIRE(pt);
    CHECK(std::abs(pt->point - kFix0) < 1e-14);
    CHECK(std::abs(pt->multiplier - (pt->point + 2.0)) < 1e-13);
    CHECK(pt->classification.kind == K::Repelling);

    auto a = std::get<PeriodicPoint>(newton_periodic(fexp, 1, -2.0, 1e-12, 100));
    CHECK(std::abs(a.point - kAttr) < 1e-14);
    CHECK(a.classification.kind == K::Attracting);

    auto k1 = std::get<PeriodicPoint>(newton_periodic(fexp, 1, cplx(2.0, 7.0), 1e-12, 100));
    CHECK(std::abs(k1.point - kFix1) < 1e-12);
}

TEST_CASE("primitive period") {
    CHECK(primitive_period(fexp, kFix0, 2) == 1);
    CHECK(primitive_period(fexp, kFix0, 1) == 1);
    auto r = newton_periodic(fexp, 2, kFix0 + 1e-3, 1e-12, 100);
    REQUIRE(std::holds_alternative<NewtonFailure>(r));
    CHECK(std::get<NewtonFailure>(r) == NewtonFailure::NotPrimitive);
}

TEST_CASE("parabolic fixed point is a multiple root") {
    auto m = EntireMap::exponential(-1.0, 5.0);
    auto r = newton_refine(m, 1, 0.3, 1e-12, 100);
    auto* root = std::get_if<NewtonRoot>(&r);
    REQUIRE(root);
    CHECK(root->multiple_root);
    CHECK(std::abs(root->point) < 1e-5);
}

TEST_CASE("window scan") {
    Window w{-5, 5, -8, 8};
    auto scan = scan_periodic(fexp, 1, w, 40, 64, 1e-12, 2);
    REQUIRE(scan.points.size() == 4);
    CHECK(std::abs(scan.points[0].point - std::conj(kFix1)) < 1e-10);
    CHECK(std::abs(scan.points[1].point - kAttr) < 1e-10);
    CHECK(std::abs(scan.points[2].point - kFix0) < 1e-10);
    CHECK(std::abs(scan.points[3].point - kFix1) < 1e-10);
    CHECK(scan.seeds == 40 * 64);
    // Thread count does not change the result.
    auto one = scan_periodic(fexp, 1, w, 40, 64, 1e-12, 1);
    REQUIRE(one.points.size() == scan.points.size());
    for (std::size_t i = 0; i < one.points.size(); ++i) CHECK(one.points[i].point == scan.points[i].point);
    CHECK(scan_periodic(fexp, 1, Window{1, 1, 0, 1}, 4, 4, 1e-12).points.empty());
}

TEST_CASE("hyperbolic set") {
    auto p0 = std::get<PeriodicPoint>(newton_periodic(fexp, 1, 1.0, 1e-12, 100));
    auto p1 = std::get<PeriodicPoint>(newton_periodic(fexp, 1, cplx(2.0, 7.0), 1e-12, 100));
    auto h = build_hyperbolic_set(fexp, {p0, p1, p0}, 1);
    CHECK(h.cycles.size() == 2);
    CHECK(h.eta == doctest::Approx(kFix0 + 2.0));
    auto a = std::get<PeriodicPoint>(newton_periodic(fexp, 1, -2.0, 1e-12, 100));
    CHECK_THROWS_AS(build_hyperbolic_set(fexp, {a}, 1), DynamicsError);
}
