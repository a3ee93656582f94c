#include "doctest.h"
#include "dreadlock/portrait.hpp"

using namespace dreadlock;

namespace {
const EntireMap& fexp() {
    static const EntireMap m = EntireMap::exponential(-2.0, 10.0);
    return m;
}
ExternalAddress A(const std::string& s) { return parse_address(s, Family::Exponential); }
PeriodicPoint refine(cplx seed) {
    return std::get<PeriodicPoint>(newton_periodic(fexp(), 1, seed, 1e-12, 100));
}
}  // namespace

TEST_CASE("default base lies in W_0") {
    CHECK(default_base(fexp()) == cplx(20.0, 0.0));
    auto c = EntireMap::cosine(0.5, 0.5, 4.0);
    CHECK(default_base(c) == cplx(0.0, -8.0));
    CHECK(c.in_W0(default_base(c)));
}

TEST_CASE("rays to fixed points") {
    const cplx base = default_base(fexp());
    auto r0 = rays_to_point(fexp(), refine(1.0), 1, 3, base);
    REQUIRE(r0.size() == 1);
    CHECK(r0[0] == A("(0)"));
    auto r1 = rays_to_point(fexp(), refine(cplx(2.0, 7.0)), 1, 3, base);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == A("(1)"));
    CHECK(rays_to_point(fexp(), refine(-2.0), 1, 3, base).empty());
}

TEST_CASE("candidate tree") {
    const cplx base = default_base(fexp());
    auto tree = candidate_tree(fexp(), refine(1.0), 2, 0.5, std::nullopt, 8, base);
    CHECK(tree.first_filtered == 2);
    CHECK(tree.levels.size() == 8);
    CHECK(prefix_invariant_holds(tree));
    for (std::size_t n = 1; n < tree.radii.size(); ++n)
        if (std::isfinite(tree.radii[n - 1])) CHECK(tree.radii[n] == doctest::Approx(tree.radii[n - 1] / 2));
    CHECK(extract_periodic(tree, 1) == std::vector<ExternalAddress>{A("(0)")});
    CHECK(extract_periodic(tree, 2).empty());

    CHECK_THROWS_AS(candidate_tree(fexp(), refine(-2.0), 2, 0.5, std::nullopt, 4, base), DynamicsError);
    try {
        (void)candidate_tree(fexp(), refine(1.0), 2, 1e-9, 1, 4, base);
        FAIL("expected EmptyLevel");
    } catch (const DynamicsError& e) {
        CHECK(e.kind() == ErrorKind::EmptyLevel);
        CHECK(e.depth() == 1);
    }
    try {
        (void)candidate_tree(fexp(), refine(1.0), 2, 0.5, std::nullopt, 12, base, 100);
        FAIL("expected TooManyCandidates");
    } catch (const DynamicsError& e) {
        CHECK(e.kind() == ErrorKind::TooManyCandidates);
    }
}

TEST_CASE("uniform landing") {
    const cplx base = default_base(fexp());
    auto H = build_hyperbolic_set(fexp(), {refine(1.0), refine(cplx(2.0, 7.0))}, 1);
    auto u = uniform_landing_check(fexp(), H, {A("(0)"), A("(1)")}, base, 1e-3, 60);
    REQUIRE(u.n0);
    CHECK(*u.n0 <= 60);
    auto huge = uniform_landing_check(fexp(), H, {A("(0)"), A("(1)")}, base, 1e9, 60);
    CHECK(huge.n0 == 1);
    // (3) lands at a fixed point outside H, so it never gets close.
    auto fail = uniform_landing_check(fexp(), H, {A("(0)"), A("(3)")}, base, 1e-3, 30);
    CHECK_FALSE(fail.n0);
    CHECK(fail.diagnostic.find("(3)") != std::string::npos);
}

TEST_CASE("portrait of e^z - 2, period 1") {
    auto rep = verify_landing_theorem(fexp(), 1, 3, Window{-5, 5, -8, 8}, default_base(fexp()));
    CHECK(rep.ok());
    CHECK(rep.pairs.size() == 3);
    CHECK(rep.points.size() == 4);
    CHECK(rep.landed_unscanned.size() == 4);
    CHECK(rep.unmatched_addresses.empty());
    auto counts = count_colanding(rep);
    REQUIRE(counts.size() == 3);
    for (const auto& c : counts) CHECK(c.count == 1);

    auto bigger = verify_landing_theorem(fexp(), 1, 4, Window{-5, 5, -8, 8}, default_base(fexp()));
    CHECK(colanding_growth(rep, bigger).empty());
    CHECK(count_colanding(PortraitReport{}).empty());
}

TEST_CASE("portrait of e^z - 1 matches the parabolic point") {
    const EntireMap m = EntireMap::exponential(-1.0, 5.0);
    PortraitOptions opts;
    opts.land.tol = 1e-6;
    opts.land.n_max = 1000000;
    auto rep = verify_landing_theorem(m, 1, 2, Window{-2, 2, -2, 2}, default_base(m), opts);
    CHECK(rep.ok());
    bool parabolic_matched = false;
    for (const auto& p : rep.pairs) {
        const auto& pt = rep.points[p.point];
        CHECK(pt.classification.kind != Classification::Kind::Attracting);
        parabolic_matched = parabolic_matched || (pt.classification.is_parabolic() && std::abs(pt.point) < 1e-4);
    }
    CHECK(parabolic_matched);
}

TEST_CASE("portrait of e^z - 2, period 2: conjugacy") {
    auto rep = verify_landing_theorem(fexp(), 2, 2, Window{-5, 5, -8, 8}, default_base(fexp()));
    CHECK(rep.ok());
    for (const auto& pair : rep.pairs) {
        const cplx image = *fexp().eval(rep.points[pair.point].point);
        bool found = false;
        for (const auto& l : rep.landings)
            if (l.address == pair.address.shift())
                found = std::abs(l.report.landing_point - image) < 1e-6;
        CHECK(found);
    }
}
