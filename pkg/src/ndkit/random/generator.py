"""Distribution-level draws on top of a bit generator.

A :class:`VariateGenerator` owns one bit generator and transforms its word
stream into uniforms, bounded integers (multiply-high rejection), and
normal/exponential variates (128-layer equal-area rejection sampling).
Filling an array of n variates consumes exactly the same words as n scalar
draws, so results are identical whichever path runs; bulk fills use the
compiled kernels when the bit generator carries a native core.
"""

from __future__ import annotations

import struct

from .._kernels._pure import (
    double_from_u64,
    lemire_draw,
    zig_exponential_draw,
    zig_normal_draw,
)
from ..core import ArrayHandle, ElemType, check_shape, empty
from .bitgen import BitGenerator
from .ziggurat import build_ziggurat

_I64_MIN = -(1 << 63)
_I64_MAX = (1 << 63) - 1


class VariateGenerator:
    """Draws variates from one owned bit generator (single-owner, not shared)."""

    def __init__(self, bitgen: BitGenerator):
        if not isinstance(bitgen, BitGenerator):
            raise TypeError("VariateGenerator needs a BitGenerator")
        self.bit_generator = bitgen

    # -- helpers -----------------------------------------------------------

    def _core(self):
        return getattr(self.bit_generator, "_core", None)

    def _fill_f64(self, shape, kind, args) -> ArrayHandle:
        out = empty(check_shape(shape), ElemType.FLOAT64)
        n = out.size
        if n == 0:
            return out
        core = self._core()
        if core is not None:
            getattr(core, "fill_" + kind)(out.buffer, n, *args)
            return out
        nxt = self.bit_generator.next_u64
        if kind == "double":
            vals = [double_from_u64(nxt()) for _ in range(n)]
        elif kind == "normal":
            vals = [zig_normal_draw(nxt, *args) for _ in range(n)]
        else:
            vals = [zig_exponential_draw(nxt, *args) for _ in range(n)]
        struct.pack_into("<%dd" % n, out.buffer, 0, *vals)
        return out

    # -- uniforms ----------------------------------------------------------

    def random_double(self, shape=None):
        """Uniform float64 in [0, 1) on the 53-bit grid (next_u64 >> 11) * 2**-53."""
        if shape is None:
            return self.bit_generator.next_double()
        return self._fill_f64(shape, "double", ())

    # -- bounded integers ----------------------------------------------------

    def integers(self, low: int, high: int, shape=None):
        """Exactly uniform int64 in [low, high) via multiply-high rejection."""
        for bound in (low, high):
            if not isinstance(bound, int) or isinstance(bound, bool):
                raise TypeError("bounds must be ints")
            if not _I64_MIN <= bound <= _I64_MAX:
                raise ValueError(f"bound {bound} outside int64 range")
        if low >= high:
            raise ValueError(f"need low < high, got [{low}, {high})")
        span = high - low
        if shape is None:
            return low + lemire_draw(self.bit_generator.next_u64, span)
        out = empty(check_shape(shape), ElemType.INT64)
        n = out.size
        if n == 0:
            return out
        core = self._core()
        if core is not None:
            core.fill_bounded(out.buffer, n, span, low)
            return out
        nxt = self.bit_generator.next_u64
        vals = [low + lemire_draw(nxt, span) for _ in range(n)]
        struct.pack_into("<%dq" % n, out.buffer, 0, *vals)
        return out

    # -- ziggurat distributions ---------------------------------------------

    def standard_normal(self, shape=None):
        t = build_ziggurat("normal")
        if shape is None:
            return zig_normal_draw(self.bit_generator.next_u64, t.xs, t.fs, t.r)
        return self._fill_f64(shape, "normal", (t.xs, t.fs, t.r))

    def standard_exponential(self, shape=None):
        t = build_ziggurat("exponential")
        if shape is None:
            return zig_exponential_draw(self.bit_generator.next_u64, t.xs, t.fs, t.r)
        return self._fill_f64(shape, "exponential", (t.xs, t.fs, t.r))
