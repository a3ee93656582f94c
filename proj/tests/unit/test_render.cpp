#include "doctest.h"
#include "dreadlock/render.hpp"

using namespace dreadlock;

namespace {
const EntireMap fexp = EntireMap::exponential(-2.0, 10.0);
}

TEST_CASE("constant escape region gives identical pixels") {
    RenderSpec spec;
    spec.window = {100, 101, 0, 1};  // everything escapes at once
    spec.width = spec.height = 2;
    auto img = render(fexp, spec, 1);
    REQUIRE(img.rgb.size() == 12);
    for (int i = 1; i < 4; ++i)
        for (int c = 0; c < 3; ++c) CHECK(img.rgb[3 * i + c] == img.rgb[c]);
}

TEST_CASE("overlay outside the window changes nothing") {
    RenderSpec spec;
    spec.width = spec.height = 32;
    auto plain = render(fexp, spec, 1);
    RayPolyline far{ExternalAddress::periodic({{0, 0}}), {cplx(50, 50), cplx(60, 70), cplx(-80, 90)}, {-2, -1, 0}};
    spec.overlays.push_back(far);
    CHECK(render(fexp, spec, 1).rgb == plain.rgb);
}

TEST_CASE("real ray draws on the real axis") {
    RenderSpec spec;
    spec.window = {-5, 5, -5, 5};
    spec.width = spec.height = 100;
    const cplx base = default_trace_base(fexp, {{0, 0}});
    spec.overlays.push_back(trace_ray(fexp, ExternalAddress::periodic({{0, 0}}), base, 20, 8));
    auto plain = [&] {
        RenderSpec s = spec;
        s.overlays.clear();
        return render(fexp, s, 1);
    }();
    auto img = render(fexp, spec, 1);
    const double axis_row = to_pixel(spec, cplx(0, 0)).y;
    int changed = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (!std::equal(img.pixel(x, y), img.pixel(x, y) + 3, plain.pixel(x, y))) {
                ++changed;
                CHECK(std::abs(y - axis_row) <= 1.0);
            }
    CHECK(changed > 0);
}

TEST_CASE("threads do not change the raster") {
    RenderSpec spec;
    spec.width = 40;
    spec.height = 30;
    CHECK(render(fexp, spec, 1).rgb == render(fexp, spec, 4).rgb);
}

TEST_CASE("resolution cap and bad specs") {
    RenderSpec spec;
    spec.width = 5000;
    try {
        (void)render(fexp, spec, 1);
        FAIL("expected ResolutionCap");
    } catch (const DynamicsError& e) {
        CHECK(e.kind() == ErrorKind::ResolutionCap);
    }
    spec.width = 10;
    spec.window = {1, 1, 0, 1};
    CHECK_THROWS_AS(render(fexp, spec, 1), DynamicsError);
}

TEST_CASE("PPM and SVG output") {
    RenderSpec spec;
    spec.width = 3;
    spec.height = 2;
    auto img = render(fexp, spec, 1);
    auto bytes = ppm_bytes(img);
    CHECK(bytes.rfind("P6\n3 2\n255\n", 0) == 0);
    CHECK(bytes.size() == 11 + 18);
    CHECK_THROWS_AS(write_ppm(img, "/nonexistent-dir/x.ppm"), DynamicsError);
    spec.marks.push_back(PeriodicPoint{cplx(0, 0), 1, 2.0, {Classification::Kind::Repelling, 0}, 0, false});
    auto svg = svg_overlay(spec);
    CHECK(svg.find("<circle") != std::string::npos);
}
