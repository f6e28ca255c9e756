"""Equal-area layer tables for rejection sampling of monotone densities.

The construction solves for the base coordinate r such that 128 layers of
equal area v = r*f(r) + tail_mass(r) exactly cover the density: starting from
x[1] = r, the recurrence x[i+1] = f_inv(f(x[i]) + v / x[i]) must land on the
density's mode after the last step.  x[0] = v / f(r) is the virtual width of
the base strip, so a draw in layer 0 that falls beyond x[1] goes to the tail
sampler with exactly the right probability.
"""

from __future__ import annotations

import math
from array import array
from functools import lru_cache
from typing import NamedTuple

from ..errors import TableError

LAYERS = 128


class ZigguratTables(NamedTuple):
    xs: array  # layer widths, xs[0] virtual, xs[1] = r, xs[LAYERS] = 0
    fs: array  # density at each width, fs[LAYERS] = 1
    r: float
    v: float


def _normal_f(x):
    return math.exp(-0.5 * x * x)


def _normal_f_inv(y):
    return math.sqrt(-2.0 * math.log(y))


def _normal_tail_mass(r):
    return math.sqrt(math.pi / 2.0) * math.erfc(r / math.sqrt(2.0))


def _exp_f(x):
    return math.exp(-x)


def _exp_f_inv(y):
    return -math.log(y)


_DENSITIES = {
    "normal": (_normal_f, _normal_f_inv, _normal_tail_mass, 2.0, 5.0),
    "exponential": (_exp_f, _exp_f_inv, _exp_f, 3.0, 12.0),
}


def _closure_gap(r, f, f_inv, tail_mass):
    """Signed miss of the last layer; positive when r is too small."""
    v = r * f(r) + tail_mass(r)
    x = r
    for i in range(LAYERS - 2):
        y = f(x) + v / x
        if y >= 1.0:
            return float(LAYERS - i)
        x = f_inv(y)
    return (f(x) + v / x) - 1.0


@lru_cache(maxsize=None)
def build_ziggurat(distribution: str) -> ZigguratTables:
    """Solve for r by bisection and emit the verified layer tables."""
    if distribution not in _DENSITIES:
        raise ValueError(f"unknown distribution {distribution!r}")
    f, f_inv, tail_mass, lo, hi = _DENSITIES[distribution]
    if _closure_gap(lo, f, f_inv, tail_mass) <= 0 or _closure_gap(hi, f, f_inv, tail_mass) >= 0:
        raise TableError(f"bisection bracket invalid for {distribution}")
    while True:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _closure_gap(mid, f, f_inv, tail_mass) > 0:
            lo = mid
        else:
            hi = mid
    # neighbouring floats straddle the root; keep the one that closes tighter
    r = min((lo, hi), key=lambda c: abs(_closure_gap(c, f, f_inv, tail_mass)))
    v = r * f(r) + tail_mass(r)

    xs = array("d", [0.0] * (LAYERS + 1))
    fs = array("d", [0.0] * (LAYERS + 1))
    xs[1] = r
    fs[1] = f(r)
    xs[0] = v / fs[1]
    fs[0] = f(xs[0])
    for i in range(1, LAYERS - 1):
        y = fs[i] + v / xs[i]
        xs[i + 1] = f_inv(y)
        fs[i + 1] = f(xs[i + 1])
    xs[LAYERS] = 0.0
    fs[LAYERS] = 1.0

    _verify(xs, fs, r, v, f, tail_mass, distribution)
    return ZigguratTables(xs, fs, r, v)


def _verify(xs, fs, r, v, f, tail_mass, distribution):
    tol = 1e-12
    closure = fs[LAYERS - 1] + v / xs[LAYERS - 1] - 1.0
    if abs(closure) > tol:
        raise TableError(f"{distribution} closure residual {closure:.3e} exceeds {tol}")
    base = xs[1] * fs[1] + tail_mass(r)
    if abs(base - v) > tol * v:
        raise TableError(f"{distribution} base strip area off by {base - v:.3e}")
    for i in range(1, LAYERS):
        area = xs[i] * (fs[i + 1] - fs[i])
        if abs(area - v) > tol * v:
            raise TableError(f"{distribution} layer {i} area off by {area - v:.3e}")
        if not xs[i + 1] < xs[i]:
            raise TableError(f"{distribution} layer widths not strictly decreasing at {i}")
