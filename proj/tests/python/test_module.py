import cmath

import pytest

import dreadlock

FIXED = 1.1461932206205825


def test_map_basics():
    m = dreadlock.EntireMap.parse("exp:-2")
    assert m.id == "exp:-2,0"
    assert m.eval(0) == pytest.approx(-1)
    assert m.deriv(1j) == pytest.approx(cmath.exp(1j))
    assert m.in_W0(20)
    assert not m.in_W0(1)
    assert m.eval(m.inverse_branch("1", 30)) == pytest.approx(30)
    assert dreadlock.default_base(m) == 20


def test_pullback_commutes_with_shift():
    m = dreadlock.EntireMap.parse("exp:-2")
    z = dreadlock.pullback_point(m, "[1] (0,-1)", n=6)
    w = dreadlock.pullback_point(m, "(0,-1)", n=5)
    assert abs(m.eval(z) - w) < 1e-9


def test_land():
    r = dreadlock.land("exp:-2", "(0)")
    assert r["status"] == "Landed"
    assert r["classification"] == "Repelling"
    assert r["landing_point"][0] == pytest.approx(FIXED, abs=1e-10)
    assert r["landing_point"][1] == 0.0


def test_scan_and_portrait():
    scan = dreadlock.scan_periodic("exp:-2", 1, (-5, 5, -8, 8), nx=16, ny=24)
    assert len(scan["points"]) == 4
    rep = dreadlock.portrait("exp:-2", 1, 2, (-5, 5, -8, 8))
    assert rep["violation_count"] == 0
    assert len(rep["pairs"]) == 3


def test_trace_ray_is_real():
    ray = dreadlock.trace_ray("exp:-2", "(0)", n_pull=4, samples=4)
    assert len(ray["vertices"]) == 1 + 4 * 4
    assert all(v[1] == 0.0 for v in ray["vertices"])
    assert ray["t_values"][-1] == 0.0


def test_render_ppm():
    data = dreadlock.render_ppm("exp:-2", (-5, 5, -5, 5), 6, 4, rays=["(0)"])
    assert data.startswith(b"P6\n6 4\n255\n")
    assert len(data) == 11 + 6 * 4 * 3


def test_errors():
    with pytest.raises(dreadlock.DynamicsError) as info:
        dreadlock.pullback_point("exp:-2", "(0)", base=1, n=1)
    assert info.value.kind
    with pytest.raises(dreadlock.DynamicsError) as info:
        dreadlock.render_ppm("exp:-2", (-5, 5, -5, 5), 5000, 10)
    assert info.value.kind == "ResolutionCap"


def test_run_command():
    code, out, err = dreadlock.run("land", "--map", "exp:-2", "--address", "(0)", "--address", "(0)")
    assert code == 0
    assert err == ""
    code, _, _ = dreadlock.run("land", "--map", "exp:-2")
    assert code == 2
