"""Pure-Python kernels.

This module is the reference implementation of every hot loop; the compiled
module ``_fast`` mirrors it exactly.  Values are kept bit-compatible with the
compiled backend: Int64 arithmetic wraps modulo 2**64 (two's complement) and
Float64 arithmetic follows IEEE-754 semantics (invalid operations yield
inf/NaN instead of raising).

Scalar draw functions (``lemire_draw``, ``zig_normal_draw``, ...) are the
canonical forms of the sampling algorithms; the bulk ``fill_*`` methods and
their compiled twins consume the underlying bit stream in exactly the same
order, so filling an array of n variates equals n scalar draws.
"""

import math
import struct
from itertools import product

MASK64 = (1 << 64) - 1
MASK32 = (1 << 32) - 1
_TWO63 = 1 << 63
_TWO64 = 1 << 64

TWO_M52 = 2.0**-52
TWO_M53 = 2.0**-53

# must match the values in _kernels/__init__.py and _fast.pyx
OP_ADD = 0
OP_SUB = 1
OP_MUL = 2
OP_DIV = 3
OP_ATAN2 = 4
OP_MAX = 5
OP_SIN = 6
OP_LOG = 7
OP_EXP = 8
OP_NEG = 9

CODE_BOOL = 0
CODE_INT64 = 1
CODE_FLOAT64 = 2

_STRUCTS = {CODE_BOOL: struct.Struct("<?"), CODE_INT64: struct.Struct("<q"), CODE_FLOAT64: struct.Struct("<d")}
_WIDTHS = {CODE_BOOL: 1, CODE_INT64: 8, CODE_FLOAT64: 8}

_INF = math.inf
_NAN = math.nan
# NaN produced by an invalid operation (matches the hardware default pattern,
# which differs in payload from the parsed float("nan"))
_CREATED_NAN = struct.unpack("<d", b"\x00\x00\x00\x00\x00\x00\xf8\xff")[0]


def _wrap_i64(x):
    return ((x + _TWO63) & MASK64) - _TWO63


def _div_f64(a, b):
    # IEEE division; Python raises on division by zero, C does not.
    # NaN operands propagate their payload, 0/0 creates a fresh NaN.
    if b == 0.0:
        if a != a:
            return a
        if a == 0.0:
            return _CREATED_NAN
        return math.copysign(_INF, a) * math.copysign(1.0, b)
    return a / b


def _atan2_f64(a, b):
    # quadrant arc tangent of b/a; NaN operands propagate (b first), unlike
    # math.atan2 which substitutes its own NaN
    if b != b:
        return b
    if a != a:
        return a
    return math.atan2(b, a)


def _max2_f64(a, b):
    if b != b:
        return b
    if a != a:
        return a
    return a if a >= b else b


def _log_f64(x):
    if x > 0.0:
        return math.log(x)
    if x == 0.0:
        return -_INF
    return _NAN


def _exp_f64(x):
    try:
        return math.exp(x)
    except OverflowError:
        return _INF


def _sin_f64(x):
    if math.isinf(x):
        return _NAN
    return math.sin(x)


_BIN_F64 = {
    OP_ADD: lambda a, b: a + b,
    OP_SUB: lambda a, b: a - b,
    OP_MUL: lambda a, b: a * b,
    OP_DIV: _div_f64,
    OP_ATAN2: _atan2_f64,  # first operand is the denominator
    OP_MAX: _max2_f64,
}

_BIN_I64 = {
    OP_ADD: lambda a, b: _wrap_i64(a + b),
    OP_SUB: lambda a, b: _wrap_i64(a - b),
    OP_MUL: lambda a, b: _wrap_i64(a * b),
    OP_MAX: lambda a, b: a if a >= b else b,
}

_UN_F64 = {
    OP_SIN: _sin_f64,
    OP_LOG: _log_f64,
    OP_EXP: _exp_f64,
    OP_NEG: lambda a: -a,
}

_UN_I64 = {OP_NEG: lambda a: _wrap_i64(-a)}


def _row_offsets(shape, strides, base):
    """Byte offsets of the first element of every row (all but last axis)."""
    if len(shape) == 1:
        return [base]
    ranges = [range(d) for d in shape[:-1]]
    outer_strides = strides[:-1]
    offs = []
    for idx in product(*ranges):
        o = base
        for i, s in zip(idx, outer_strides):
            o += i * s
        offs.append(o)
    return offs


def copy_cast(dst, dst_code, src, src_off, shape, strides, src_code):
    """Strided gather of ``src`` into C-contiguous ``dst`` with upward cast."""
    n_last = shape[-1]
    sw = _WIDTHS[src_code]
    dw = _WIDTHS[dst_code]
    unpack = _STRUCTS[src_code].unpack_from
    last_stride = strides[-1]
    pos = 0
    if dst_code == CODE_BOOL:
        fmt = "<%d?" % n_last
    elif dst_code == CODE_INT64:
        fmt = "<%dq" % n_last
    else:
        fmt = "<%dd" % n_last
    cast = None
    if src_code != dst_code:
        cast = float if dst_code == CODE_FLOAT64 else int
    for base in _row_offsets(shape, strides, src_off):
        row = [unpack(src, base + j * last_stride)[0] for j in range(n_last)]
        if cast is not None:
            row = [cast(v) for v in row]
        struct.pack_into(fmt, dst, pos, *row)
        pos += n_last * dw


def elementwise1(op, code, out, a, a_off, a_strides, shape):
    """Unary op over a strided operand into C-contiguous ``out``."""
    fn = _UN_F64[op] if code == CODE_FLOAT64 else _UN_I64[op]
    n_last = shape[-1]
    unpack = _STRUCTS[code].unpack_from
    fmt = ("<%dd" if code == CODE_FLOAT64 else "<%dq") % n_last
    last = a_strides[-1]
    w = _WIDTHS[code]
    pos = 0
    for base in _row_offsets(shape, a_strides, a_off):
        row = [fn(unpack(a, base + j * last)[0]) for j in range(n_last)]
        struct.pack_into(fmt, out, pos, *row)
        pos += n_last * w


def elementwise2(op, code, out, a, a_off, a_strides, b, b_off, b_strides, shape):
    """Binary op over two broadcast-adjusted strided operands."""
    fn = _BIN_F64[op] if code == CODE_FLOAT64 else _BIN_I64[op]
    n_last = shape[-1]
    unpack = _STRUCTS[code].unpack_from
    fmt = ("<%dd" if code == CODE_FLOAT64 else "<%dq") % n_last
    la, lb = a_strides[-1], b_strides[-1]
    w = _WIDTHS[code]
    pos = 0
    rows_a = _row_offsets(shape, a_strides, a_off)
    rows_b = _row_offsets(shape, b_strides, b_off)
    for base_a, base_b in zip(rows_a, rows_b):
        row = [
            fn(unpack(a, base_a + j * la)[0], unpack(b, base_b + j * lb)[0])
            for j in range(n_last)
        ]
        struct.pack_into(fmt, out, pos, *row)
        pos += n_last * w


def reduce_flat(op, code, buf, off, n):
    """Left fold over ``n`` consecutive elements starting at byte ``off``."""
    if code == CODE_FLOAT64:
        mv = memoryview(buf)[off : off + 8 * n].cast("d")
        if op == OP_ADD:
            return _left_sum(mv)
        if op == OP_MUL:
            acc = 1.0
            for v in mv:
                acc = acc * v
            return acc
        acc = -_INF
        for v in mv:
            acc = _max2_f64(acc, v)
        return acc
    mv = memoryview(buf)[off : off + 8 * n].cast("q")
    if op == OP_ADD:
        return _wrap_i64(sum(mv))
    if op == OP_MUL:
        return _wrap_i64(math.prod(mv))
    return max(mv) if n else -_TWO63


def _left_sum(values):
    # plain left-to-right fold; bitwise identical to the compiled loop
    return sum(values, 0.0)


def reduce_fold(op, code, out, src, src_off, keep_shape, keep_strides, red_shape, red_strides):
    """Reduce the ``red`` axes of a strided view, one output cell per keep-index."""
    unpack = _STRUCTS[code].unpack_from
    pack_into = _STRUCTS[code].pack_into
    w = _WIDTHS[code]
    if code == CODE_FLOAT64:
        fn = _BIN_F64[op]
        init = 0.0 if op == OP_ADD else (1.0 if op == OP_MUL else -_INF)
    else:
        fn = _BIN_I64[op]
        init = 0 if op == OP_ADD else (1 if op == OP_MUL else -_TWO63)
    keep_ranges = [range(d) for d in keep_shape]
    red_ranges = [range(d) for d in red_shape]
    pos = 0
    for kidx in product(*keep_ranges):
        base = src_off
        for i, s in zip(kidx, keep_strides):
            base += i * s
        acc = init
        for ridx in product(*red_ranges):
            o = base
            for i, s in zip(ridx, red_strides):
                o += i * s
            acc = fn(acc, unpack(src, o)[0])
        pack_into(out, pos, acc)
        pos += w


def matmul_f64(out, a, b, m, k, n):
    """(m,k) @ (k,n) over C-contiguous float64 buffers, i-k-j loop order."""
    mva = memoryview(a).cast("d")
    mvb = memoryview(b).cast("d")
    mvo = memoryview(out).cast("d")
    for i in range(m):
        arow = i * k
        orow = i * n
        for kk in range(k):
            aik = mva[arow + kk]
            brow = kk * n
            for j in range(n):
                mvo[orow + j] += aik * mvb[brow + j]


# ---------------------------------------------------------------------------
# scalar sampling algorithms (canonical forms)
# ---------------------------------------------------------------------------


def double_from_u64(w):
    """Uniform double in [0, 1) on the 53-bit grid."""
    return (w >> 11) * TWO_M53


def lemire_draw(next_u64, span):
    """Exactly uniform integer in [0, span) by multiply-high rejection."""
    x = next_u64()
    m = x * span
    lo = m & MASK64
    if lo < span:
        t = (_TWO64 - span) % span
        while lo < t:
            x = next_u64()
            m = x * span
            lo = m & MASK64
    return m >> 64


def zig_normal_draw(next_u64, xs, fs, r):
    """One standard-normal variate from 128-layer equal-area tables.

    One u64 supplies the layer index (7 bits), the sign (1 bit), and a 52-bit
    uniform fraction; slow paths consume further words for the tail pair test
    or the wedge accept test.
    """
    while True:
        w = next_u64()
        idx = w & 127
        sign = (w >> 7) & 1
        x = ((w >> 12) * TWO_M52) * xs[idx]
        if x < xs[idx + 1]:
            return -x if sign else x
        if idx == 0:
            while True:
                xt = -math.log(1.0 - double_from_u64(next_u64())) / r
                yt = -math.log(1.0 - double_from_u64(next_u64()))
                if yt + yt >= xt * xt:
                    return -(r + xt) if sign else (r + xt)
        else:
            y = fs[idx] + double_from_u64(next_u64()) * (fs[idx + 1] - fs[idx])
            if y < math.exp(-0.5 * x * x):
                return -x if sign else x


def zig_exponential_draw(next_u64, xs, fs, r):
    """One standard-exponential variate; same layout, no sign bit."""
    while True:
        w = next_u64()
        idx = w & 127
        x = ((w >> 12) * TWO_M52) * xs[idx]
        if x < xs[idx + 1]:
            return x
        if idx == 0:
            # memoryless tail: r plus a fresh exponential via inversion
            return r - math.log(1.0 - double_from_u64(next_u64()))
        y = fs[idx] + double_from_u64(next_u64()) * (fs[idx + 1] - fs[idx])
        if y < math.exp(-x):
            return x


# ---------------------------------------------------------------------------
# bit-generator cores
# ---------------------------------------------------------------------------

PCG_MULT = 0x2360ED051FC65DA44385DF649FCCF645
_MASK128 = (1 << 128) - 1


class _FillMixin:
    """Bulk fills shared by both cores; byte-for-byte equal to n scalar draws."""

    def fill_u64(self, out, n):
        nxt = self.next_u64
        struct.pack_into("<%dQ" % n, out, 0, *[nxt() for _ in range(n)])

    def fill_double(self, out, n):
        nxt = self.next_u64
        struct.pack_into("<%dd" % n, out, 0, *[(nxt() >> 11) * TWO_M53 for _ in range(n)])

    def fill_normal(self, out, n, xs, fs, r):
        nxt = self.next_u64
        struct.pack_into("<%dd" % n, out, 0, *[zig_normal_draw(nxt, xs, fs, r) for _ in range(n)])

    def fill_exponential(self, out, n, xs, fs, r):
        nxt = self.next_u64
        struct.pack_into(
            "<%dd" % n, out, 0, *[zig_exponential_draw(nxt, xs, fs, r) for _ in range(n)]
        )

    def fill_bounded(self, out, n, span, base):
        nxt = self.next_u64
        struct.pack_into(
            "<%dq" % n, out, 0, *[base + lemire_draw(nxt, span) for _ in range(n)]
        )


class Pcg64Core(_FillMixin):
    """128-bit LCG with XSL-RR output, advance-then-output order."""

    def __init__(self, state_hi, state_lo, inc_hi, inc_lo):
        self._state = ((state_hi << 64) | state_lo) & _MASK128
        self._inc = ((inc_hi << 64) | inc_lo) & _MASK128

    def next_u64(self):
        self._state = (self._state * PCG_MULT + self._inc) & _MASK128
        hi = self._state >> 64
        lo = self._state & MASK64
        rot = hi >> 58
        x = hi ^ lo
        return ((x >> rot) | (x << ((-rot) & 63))) & MASK64

    def get_state(self):
        return (
            self._state >> 64,
            self._state & MASK64,
            self._inc >> 64,
            self._inc & MASK64,
        )

    def set_state(self, state_hi, state_lo, inc_hi, inc_lo):
        self._state = ((state_hi << 64) | state_lo) & _MASK128
        self._inc = ((inc_hi << 64) | inc_lo) & _MASK128


class Mt19937Core(_FillMixin):
    """Standard 32-bit Mersenne twister (n=624, m=397)."""

    def __init__(self, key, pos):
        key = list(key)
        if len(key) != 624:
            raise ValueError("mt19937 key must have 624 words")
        self._key = [w & MASK32 for w in key]
        self._pos = pos

    def next_u32(self):
        if self._pos >= 624:
            key = self._key
            for i in range(624):
                y = (key[i] & 0x80000000) | (key[(i + 1) % 624] & 0x7FFFFFFF)
                key[i] = key[(i + 397) % 624] ^ (y >> 1)
                if y & 1:
                    key[i] ^= 0x9908B0DF
            self._pos = 0
        y = self._key[self._pos]
        self._pos += 1
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680
        y ^= (y << 15) & 0xEFC60000
        y ^= y >> 18
        return y & MASK32

    def next_u64(self):
        # first 32-bit draw forms the high word
        hi = self.next_u32()
        return (hi << 32) | self.next_u32()

    def get_state(self):
        return list(self._key), self._pos

    def set_state(self, key, pos):
        self._key = [w & MASK32 for w in key]
        self._pos = pos
