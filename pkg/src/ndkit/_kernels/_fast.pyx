# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; must stay bit-compatible with the ``_pure`` mirror.

Int64 arithmetic wraps modulo 2**64 (performed on unsigned values, so it is
defined behaviour), Float64 follows IEEE-754.  The build disables FP
contraction so float results match the pure backend exactly.
"""

from libc.stdint cimport int64_t, uint8_t, uint32_t, uint64_t
from libc.math cimport atan2, exp, log, sin, INFINITY, NAN, isinf, isnan

cdef extern from *:
    """
    typedef unsigned __int128 ndkit_uint128;
    static const ndkit_uint128 NDKIT_PCG_MULT =
        (((ndkit_uint128)0x2360ED051FC65DA4ULL) << 64) | 0x4385DF649FCCF645ULL;
    """
    ctypedef unsigned long long uint128 "ndkit_uint128"
    uint128 PCG_MULT "NDKIT_PCG_MULT"

cdef enum:
    MAXND = 64

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

cdef double TWO_M52 = 2.0 ** -52
cdef double TWO_M53 = 2.0 ** -53

cdef int _C_ADD = 0, _C_SUB = 1, _C_MUL = 2, _C_DIV = 3, _C_ATAN2 = 4, _C_MAX = 5
cdef int _C_SIN = 6, _C_LOG = 7, _C_EXP = 8, _C_NEG = 9
cdef int64_t _I64_MIN = (<int64_t>-0x7FFFFFFFFFFFFFFF) - 1


cdef inline double _bin_f64(int op, double x, double y) nogil:
    if op == _C_ADD:
        return x + y
    elif op == _C_SUB:
        return x - y
    elif op == _C_MUL:
        return x * y
    elif op == _C_DIV:
        return x / y
    elif op == _C_ATAN2:
        # first operand is the denominator; NaN operands propagate (y first)
        if isnan(y):
            return y
        if isnan(x):
            return x
        return atan2(y, x)
    else:
        if isnan(y):
            return y
        if isnan(x):
            return x
        return x if x >= y else y


cdef inline int64_t _bin_i64(int op, int64_t x, int64_t y) nogil:
    if op == _C_ADD:
        return <int64_t>(<uint64_t>x + <uint64_t>y)
    elif op == _C_SUB:
        return <int64_t>(<uint64_t>x - <uint64_t>y)
    elif op == _C_MUL:
        return <int64_t>(<uint64_t>x * <uint64_t>y)
    else:
        return x if x >= y else y


cdef inline double _un_f64(int op, double x) nogil:
    if op == _C_SIN:
        if isinf(x):
            return NAN
        return sin(x)
    elif op == _C_LOG:
        if x > 0.0:
            return log(x)
        if x == 0.0:
            return -INFINITY
        return NAN
    elif op == _C_EXP:
        return exp(x)
    else:
        return -x


cdef inline int _load_dims(tuple t, Py_ssize_t* arr) except -1:
    cdef int n = len(t)
    cdef int i
    if n > MAXND:
        raise ValueError("too many dimensions for the compiled kernels")
    for i in range(n):
        arr[i] = t[i]
    return n


cdef inline Py_ssize_t _total(Py_ssize_t* dims, int nd) nogil:
    cdef Py_ssize_t total = 1
    cdef int i
    for i in range(nd):
        total *= dims[i]
    return total


def copy_cast(unsigned char[::1] dst, int dst_code,
              const unsigned char[::1] src, Py_ssize_t src_off,
              tuple shape, tuple strides, int src_code):
    cdef Py_ssize_t dims[MAXND]
    cdef Py_ssize_t st[MAXND]
    cdef Py_ssize_t idx[MAXND]
    cdef int nd = _load_dims(shape, dims)
    _load_dims(strides, st)
    cdef Py_ssize_t total = _total(dims, nd)
    if total == 0:
        return
    cdef const unsigned char* ps = &src[0]
    cdef unsigned char* pd = &dst[0]
    cdef Py_ssize_t n_last = dims[nd - 1]
    cdef Py_ssize_t s_last = st[nd - 1]
    cdef Py_ssize_t rows = total // n_last
    cdef Py_ssize_t row, j, off = src_off, pos = 0
    cdef int k
    cdef double fv
    cdef int64_t iv
    for k in range(nd):
        idx[k] = 0
    for row in range(rows):
        for j in range(n_last):
            if src_code == 2:
                fv = (<const double*>(ps + off + j * s_last))[0]
                (<double*>(pd + pos))[0] = fv
                pos += 8
            elif src_code == 1:
                iv = (<const int64_t*>(ps + off + j * s_last))[0]
                if dst_code == 1:
                    (<int64_t*>(pd + pos))[0] = iv
                else:
                    (<double*>(pd + pos))[0] = <double>iv
                pos += 8
            else:
                iv = 1 if (ps + off + j * s_last)[0] != 0 else 0
                if dst_code == 0:
                    pd[pos] = <unsigned char>iv
                    pos += 1
                elif dst_code == 1:
                    (<int64_t*>(pd + pos))[0] = iv
                    pos += 8
                else:
                    (<double*>(pd + pos))[0] = <double>iv
                    pos += 8
        for k in range(nd - 2, -1, -1):
            idx[k] += 1
            off += st[k]
            if idx[k] < dims[k]:
                break
            idx[k] = 0
            off -= st[k] * dims[k]


def elementwise1(int op, int code, unsigned char[::1] out,
                 const unsigned char[::1] a, Py_ssize_t a_off,
                 tuple a_strides, tuple shape):
    cdef Py_ssize_t dims[MAXND]
    cdef Py_ssize_t sa[MAXND]
    cdef Py_ssize_t idx[MAXND]
    cdef int nd = _load_dims(shape, dims)
    _load_dims(a_strides, sa)
    cdef Py_ssize_t total = _total(dims, nd)
    if total == 0:
        return
    cdef const unsigned char* pa = &a[0]
    cdef unsigned char* po = &out[0]
    cdef Py_ssize_t n_last = dims[nd - 1]
    cdef Py_ssize_t s_last = sa[nd - 1]
    cdef Py_ssize_t rows = total // n_last
    cdef Py_ssize_t row, j, off = a_off, pos = 0
    cdef int k
    for k in range(nd):
        idx[k] = 0
    with nogil:
        for row in range(rows):
            if code == 2:
                for j in range(n_last):
                    (<double*>(po + pos))[0] = _un_f64(op, (<const double*>(pa + off + j * s_last))[0])
                    pos += 8
            else:
                for j in range(n_last):
                    (<int64_t*>(po + pos))[0] = <int64_t>(0 - <uint64_t>((<const int64_t*>(pa + off + j * s_last))[0]))
                    pos += 8
            for k in range(nd - 2, -1, -1):
                idx[k] += 1
                off += sa[k]
                if idx[k] < dims[k]:
                    break
                idx[k] = 0
                off -= sa[k] * dims[k]


def elementwise2(int op, int code, unsigned char[::1] out,
                 const unsigned char[::1] a, Py_ssize_t a_off, tuple a_strides,
                 const unsigned char[::1] b, Py_ssize_t b_off, tuple b_strides,
                 tuple shape):
    cdef Py_ssize_t dims[MAXND]
    cdef Py_ssize_t sa[MAXND]
    cdef Py_ssize_t sb[MAXND]
    cdef Py_ssize_t idx[MAXND]
    cdef int nd = _load_dims(shape, dims)
    _load_dims(a_strides, sa)
    _load_dims(b_strides, sb)
    cdef Py_ssize_t total = _total(dims, nd)
    if total == 0:
        return
    cdef const unsigned char* pa = &a[0]
    cdef const unsigned char* pb = &b[0]
    cdef unsigned char* po = &out[0]
    cdef Py_ssize_t n_last = dims[nd - 1]
    cdef Py_ssize_t la = sa[nd - 1], lb = sb[nd - 1]
    cdef Py_ssize_t rows = total // n_last
    cdef Py_ssize_t row, j, off_a = a_off, off_b = b_off, pos = 0
    cdef int k
    cdef bint contig = (la == 8 and lb == 8)
    cdef const double* fa
    cdef const double* fb
    cdef double* fo
    cdef const int64_t* ia
    cdef const int64_t* ib
    cdef int64_t* io
    for k in range(nd):
        idx[k] = 0
    with nogil:
        for row in range(rows):
            if code == 2:
                if contig:
                    # trailing strides equal the element width: tight loop
                    fa = <const double*>(pa + off_a)
                    fb = <const double*>(pb + off_b)
                    fo = <double*>(po + pos)
                    for j in range(n_last):
                        fo[j] = _bin_f64(op, fa[j], fb[j])
                    pos += 8 * n_last
                else:
                    for j in range(n_last):
                        (<double*>(po + pos))[0] = _bin_f64(
                            op,
                            (<const double*>(pa + off_a + j * la))[0],
                            (<const double*>(pb + off_b + j * lb))[0],
                        )
                        pos += 8
            else:
                if contig:
                    ia = <const int64_t*>(pa + off_a)
                    ib = <const int64_t*>(pb + off_b)
                    io = <int64_t*>(po + pos)
                    for j in range(n_last):
                        io[j] = _bin_i64(op, ia[j], ib[j])
                    pos += 8 * n_last
                else:
                    for j in range(n_last):
                        (<int64_t*>(po + pos))[0] = _bin_i64(
                            op,
                            (<const int64_t*>(pa + off_a + j * la))[0],
                            (<const int64_t*>(pb + off_b + j * lb))[0],
                        )
                        pos += 8
            for k in range(nd - 2, -1, -1):
                idx[k] += 1
                off_a += sa[k]
                off_b += sb[k]
                if idx[k] < dims[k]:
                    break
                idx[k] = 0
                off_a -= sa[k] * dims[k]
                off_b -= sb[k] * dims[k]


def reduce_flat(int op, int code, const unsigned char[::1] buf, Py_ssize_t off, Py_ssize_t n):
    """Left fold over n consecutive elements; returns a Python scalar."""
    cdef const unsigned char* p
    cdef Py_ssize_t i
    cdef double facc
    cdef const double* fp
    cdef int64_t iacc
    cdef uint64_t uacc
    cdef const int64_t* ip
    if n == 0 and code == CODE_FLOAT64:
        return 0.0 if op == _C_ADD else (1.0 if op == _C_MUL else -INFINITY)
    if n == 0:
        return 0 if op == _C_ADD else (1 if op == _C_MUL else _I64_MIN)
    p = &buf[0]
    if code == 2:
        fp = <const double*>(p + off)
        if op == _C_ADD:
            facc = 0.0
            with nogil:
                for i in range(n):
                    facc = facc + fp[i]
        elif op == _C_MUL:
            facc = 1.0
            with nogil:
                for i in range(n):
                    facc = facc * fp[i]
        else:
            facc = -INFINITY
            with nogil:
                for i in range(n):
                    facc = _bin_f64(_C_MAX, facc, fp[i])
        return facc
    ip = <const int64_t*>(p + off)
    if op == _C_ADD:
        uacc = 0
        with nogil:
            for i in range(n):
                uacc = uacc + <uint64_t>ip[i]
        return <int64_t>uacc
    elif op == _C_MUL:
        uacc = 1
        with nogil:
            for i in range(n):
                uacc = uacc * <uint64_t>ip[i]
        return <int64_t>uacc
    iacc = _I64_MIN
    with nogil:
        for i in range(n):
            if ip[i] > iacc:
                iacc = ip[i]
    return iacc


def reduce_fold(int op, int code, unsigned char[::1] out,
                const unsigned char[::1] src, Py_ssize_t src_off,
                tuple keep_shape, tuple keep_strides,
                tuple red_shape, tuple red_strides):
    cdef Py_ssize_t kdims[MAXND]
    cdef Py_ssize_t kst[MAXND]
    cdef Py_ssize_t rdims[MAXND]
    cdef Py_ssize_t rst[MAXND]
    cdef Py_ssize_t kidx[MAXND]
    cdef Py_ssize_t ridx[MAXND]
    cdef int knd = _load_dims(keep_shape, kdims)
    _load_dims(keep_strides, kst)
    cdef int rnd = _load_dims(red_shape, rdims)
    _load_dims(red_strides, rst)
    cdef Py_ssize_t n_out = _total(kdims, knd)
    cdef Py_ssize_t n_red = _total(rdims, rnd)
    if n_out == 0 or n_red == 0:
        return
    cdef const unsigned char* ps = &src[0]
    cdef unsigned char* po = &out[0]
    cdef Py_ssize_t r_last = rdims[rnd - 1]
    cdef Py_ssize_t rs_last = rst[rnd - 1]
    cdef Py_ssize_t red_rows = n_red // r_last
    cdef Py_ssize_t cell, rrow, j, base = src_off, roff, pos = 0
    cdef int k
    cdef double facc
    cdef int64_t iacc
    cdef double finit = 0.0 if op == _C_ADD else (1.0 if op == _C_MUL else -INFINITY)
    cdef int64_t iinit = 0 if op == _C_ADD else (1 if op == _C_MUL else _I64_MIN)
    for k in range(knd):
        kidx[k] = 0
    with nogil:
        for cell in range(n_out):
            for k in range(rnd):
                ridx[k] = 0
            roff = base
            if code == 2:
                facc = finit
                for rrow in range(red_rows):
                    for j in range(r_last):
                        facc = _bin_f64(op, facc, (<const double*>(ps + roff + j * rs_last))[0])
                    for k in range(rnd - 2, -1, -1):
                        ridx[k] += 1
                        roff += rst[k]
                        if ridx[k] < rdims[k]:
                            break
                        ridx[k] = 0
                        roff -= rst[k] * rdims[k]
                (<double*>(po + pos))[0] = facc
            else:
                iacc = iinit
                for rrow in range(red_rows):
                    for j in range(r_last):
                        iacc = _bin_i64(op, iacc, (<const int64_t*>(ps + roff + j * rs_last))[0])
                    for k in range(rnd - 2, -1, -1):
                        ridx[k] += 1
                        roff += rst[k]
                        if ridx[k] < rdims[k]:
                            break
                        ridx[k] = 0
                        roff -= rst[k] * rdims[k]
                (<int64_t*>(po + pos))[0] = iacc
            pos += 8
            for k in range(knd - 1, -1, -1):
                kidx[k] += 1
                base += kst[k]
                if kidx[k] < kdims[k]:
                    break
                kidx[k] = 0
                base -= kst[k] * kdims[k]


def matmul_f64(unsigned char[::1] out, const unsigned char[::1] a,
               const unsigned char[::1] b, Py_ssize_t m, Py_ssize_t k, Py_ssize_t n):
    if m == 0 or n == 0 or k == 0:
        return
    cdef const double* pa = <const double*>&a[0]
    cdef const double* pb = <const double*>&b[0]
    cdef double* po = <double*>&out[0]
    cdef Py_ssize_t i, kk, j
    cdef double aik
    with nogil:
        for i in range(m):
            for kk in range(k):
                aik = pa[i * k + kk]
                for j in range(n):
                    po[i * n + j] = po[i * n + j] + aik * pb[kk * n + j]


# ---------------------------------------------------------------------------
# bit-generator cores and distribution fills
# ---------------------------------------------------------------------------


cdef class BitCore:
    cdef uint64_t next64(self):
        raise NotImplementedError

    def next_u64(self):
        return self.next64()

    cdef inline double next_double(self):
        return <double>(self.next64() >> 11) * TWO_M53

    def fill_u64(self, unsigned char[::1] out, Py_ssize_t n):
        if n <= 0:
            return
        cdef uint64_t* p = <uint64_t*>&out[0]
        cdef Py_ssize_t i
        for i in range(n):
            p[i] = self.next64()

    def fill_double(self, unsigned char[::1] out, Py_ssize_t n):
        if n <= 0:
            return
        cdef double* p = <double*>&out[0]
        cdef Py_ssize_t i
        for i in range(n):
            p[i] = <double>(self.next64() >> 11) * TWO_M53

    def fill_normal(self, unsigned char[::1] out, Py_ssize_t n,
                    double[::1] xs, double[::1] fs, double r):
        if n <= 0:
            return
        cdef double* p = <double*>&out[0]
        cdef Py_ssize_t i
        for i in range(n):
            p[i] = self._zig_normal(&xs[0], &fs[0], r)

    def fill_exponential(self, unsigned char[::1] out, Py_ssize_t n,
                         double[::1] xs, double[::1] fs, double r):
        if n <= 0:
            return
        cdef double* p = <double*>&out[0]
        cdef Py_ssize_t i
        for i in range(n):
            p[i] = self._zig_exponential(&xs[0], &fs[0], r)

    def fill_bounded(self, unsigned char[::1] out, Py_ssize_t n,
                     uint64_t span, long long base):
        if n <= 0:
            return
        cdef int64_t* p = <int64_t*>&out[0]
        cdef Py_ssize_t i
        for i in range(n):
            p[i] = <int64_t>(<uint64_t>base + self._lemire(span))

    cdef uint64_t _lemire(self, uint64_t span):
        cdef uint64_t x = self.next64()
        cdef uint128 m = <uint128>x * span
        cdef uint64_t lo = <uint64_t>m
        cdef uint64_t t
        if lo < span:
            t = (0 - span) % span
            while lo < t:
                x = self.next64()
                m = <uint128>x * span
                lo = <uint64_t>m
        return <uint64_t>(m >> 64)

    cdef double _zig_normal(self, double* xs, double* fs, double r):
        cdef uint64_t w, idx, sign
        cdef double x, xt, yt, y
        while True:
            w = self.next64()
            idx = w & 127
            sign = (w >> 7) & 1
            x = (<double>(w >> 12) * TWO_M52) * xs[idx]
            if x < xs[idx + 1]:
                return -x if sign else x
            if idx == 0:
                while True:
                    xt = -log(1.0 - self.next_double()) / r
                    yt = -log(1.0 - self.next_double())
                    if yt + yt >= xt * xt:
                        return -(r + xt) if sign else (r + xt)
            else:
                y = fs[idx] + self.next_double() * (fs[idx + 1] - fs[idx])
                if y < exp(-0.5 * x * x):
                    return -x if sign else x

    cdef double _zig_exponential(self, double* xs, double* fs, double r):
        cdef uint64_t w, idx
        cdef double x, y
        while True:
            w = self.next64()
            idx = w & 127
            x = (<double>(w >> 12) * TWO_M52) * xs[idx]
            if x < xs[idx + 1]:
                return x
            if idx == 0:
                return r - log(1.0 - self.next_double())
            y = fs[idx] + self.next_double() * (fs[idx + 1] - fs[idx])
            if y < exp(-x):
                return x


cdef class Pcg64Core(BitCore):
    cdef uint128 state
    cdef uint128 inc

    def __init__(self, state_hi, state_lo, inc_hi, inc_lo):
        self.set_state(state_hi, state_lo, inc_hi, inc_lo)

    cdef uint64_t next64(self):
        cdef uint64_t hi, lo, rot, x
        self.state = self.state * PCG_MULT + self.inc
        hi = <uint64_t>(self.state >> 64)
        lo = <uint64_t>self.state
        rot = hi >> 58
        x = hi ^ lo
        return (x >> rot) | (x << ((0 - rot) & 63))

    def get_state(self):
        return (
            <uint64_t>(self.state >> 64),
            <uint64_t>self.state,
            <uint64_t>(self.inc >> 64),
            <uint64_t>self.inc,
        )

    def set_state(self, state_hi, state_lo, inc_hi, inc_lo):
        self.state = (<uint128><uint64_t>state_hi << 64) | <uint128><uint64_t>state_lo
        self.inc = (<uint128><uint64_t>inc_hi << 64) | <uint128><uint64_t>inc_lo


cdef class Mt19937Core(BitCore):
    cdef uint32_t key[624]
    cdef int pos

    def __init__(self, key, pos):
        self.set_state(key, pos)

    cdef uint32_t next32(self):
        cdef int i
        cdef uint32_t y
        if self.pos >= 624:
            for i in range(624):
                y = (self.key[i] & 0x80000000u) | (self.key[(i + 1) % 624] & 0x7FFFFFFFu)
                self.key[i] = self.key[(i + 397) % 624] ^ (y >> 1)
                if y & 1:
                    self.key[i] ^= 0x9908B0DFu
            self.pos = 0
        y = self.key[self.pos]
        self.pos += 1
        y ^= y >> 11
        y ^= (y << 7) & 0x9D2C5680u
        y ^= (y << 15) & 0xEFC60000u
        y ^= y >> 18
        return y

    cdef uint64_t next64(self):
        # first 32-bit draw forms the high word
        cdef uint64_t hi = self.next32()
        return (hi << 32) | self.next32()

    def next_u32(self):
        return self.next32()

    def get_state(self):
        return [self.key[i] for i in range(624)], self.pos

    def set_state(self, key, pos):
        cdef int i
        if len(key) != 624:
            raise ValueError("mt19937 key must have 624 words")
        for i in range(624):
            self.key[i] = <uint32_t>(key[i] & 0xFFFFFFFF)
        self.pos = pos
