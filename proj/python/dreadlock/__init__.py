"""Python front end for the dreadlock C++ core.

Calls that produce reports return decoded JSON (dicts), with the same
layout as the CLI output.
"""

import json

from . import _dreadlock
from ._dreadlock import EntireMap, default_base

__all__ = [
    "DynamicsError",
    "EntireMap",
    "default_base",
    "land",
    "portrait",
    "pullback_point",
    "render_ppm",
    "run",
    "scan_periodic",
    "trace_ray",
]


class DynamicsError(RuntimeError):
    def __init__(self, info):
        super().__init__(info.get("message", ""))
        self.kind = info.get("kind")
        self.depth = info.get("depth")
        self.info = info


def _map(m):
    return EntireMap.parse(m) if isinstance(m, str) else m


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _dreadlock.DynamicsError as e:
        raise DynamicsError(json.loads(str(e))) from None


def pullback_point(m, address, base=None, n=1):
    return _call(_dreadlock.pullback_point, _map(m), address, base, n)


def render_ppm(m, window, width, height, rays=(), threads=0):
    """Binary PPM (P6) bytes of the escape-time picture with ray overlays."""
    return _call(_dreadlock.render_ppm, _map(m), list(window), width, height, list(rays), threads)


def land(m, address, base=None, tol=1e-10, n_max=10000):
    return json.loads(_call(_dreadlock.land, _map(m), address, base, tol, n_max))


def trace_ray(m, address, n_pull=20, samples=8, base=None):
    return json.loads(_call(_dreadlock.trace_ray, _map(m), address, n_pull, samples, base))


def scan_periodic(m, period, window, nx=64, ny=64, tol=1e-12, threads=0):
    return json.loads(_call(_dreadlock.scan_periodic, _map(m), period, list(window), nx, ny, tol, threads))


def portrait(m, period, K, window, threads=0):
    return json.loads(_call(_dreadlock.portrait, _map(m), period, K, list(window), threads))


def run(*args):
    """Runs a CLI subcommand, e.g. run("land", "--map", "exp:-2", "--address", "(0)").

    Returns (exit_code, stdout, stderr).
    """
    return _dreadlock.run_command([str(a) for a in args])
