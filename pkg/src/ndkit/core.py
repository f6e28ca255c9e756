"""Strided n-dimensional arrays over shared byte buffers.

An :class:`ArrayHandle` is a view onto a ``bytearray``: element type, shape,
per-axis byte strides, and a byte offset of element ``(0, ..., 0)``.  Several
handles may alias the same buffer; the buffer lives as long as any handle
references it.  A freshly constructed dense array is C-contiguous.

Handles may be sent between threads.  Any number of threads may read a
buffer concurrently; writing requires caller-guaranteed exclusive access to
that buffer (there is no internal locking), and no operation mutates shared
state behind the caller's back.
"""

from __future__ import annotations

import enum
import math
import struct
from typing import NamedTuple, Sequence

from ._kernels import kernels as _K
from .errors import ReadOnlyError, ShapeError


class ElemType(enum.Enum):
    """Homogeneous element kind with a fixed byte width."""

    BOOL = ("bool", 0, 1, "<?")
    INT64 = ("int64", 1, 8, "<q")
    FLOAT64 = ("float64", 2, 8, "<d")

    def __init__(self, label, code, byte_width, fmt):
        self.label = label
        self.code = code
        self.byte_width = byte_width
        self.fmt = fmt

    @classmethod
    def from_code(cls, code: int) -> "ElemType":
        for et in cls:
            if et.code == code:
                return et
        raise ValueError(f"unknown element-type code {code}")

    def __repr__(self):
        return f"ElemType.{self.name}"


BOOL = ElemType.BOOL
INT64 = ElemType.INT64
FLOAT64 = ElemType.FLOAT64

_RANK = {ElemType.BOOL: 0, ElemType.INT64: 1, ElemType.FLOAT64: 2}

_I64_MIN = -(1 << 63)
_I64_MAX = (1 << 63) - 1


def promote(a: ElemType, b: ElemType) -> ElemType:
    """Combined type on the Bool < Int64 < Float64 lattice."""
    return a if _RANK[a] >= _RANK[b] else b


def check_shape(shape) -> tuple:
    if isinstance(shape, int):
        shape = (shape,)
    dims = tuple(shape)
    for d in dims:
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise ShapeError(f"invalid shape {dims!r}: extents must be non-negative ints")
    return dims

def element_count(shape) -> int:
    return math.prod(shape)


def compute_strides(shape, byte_width: int, order: str = "C") -> tuple:
    """Per-axis byte steps of a dense layout.

    C order iterates the last axis fastest, F order the first.
    """
    shape = check_shape(shape)
    if byte_width <= 0:
        raise ValueError("byte_width must be positive")
    if order not in ("C", "F"):
        raise ValueError(f"order must be 'C' or 'F', got {order!r}")
    strides = [0] * len(shape)
    acc = byte_width
    axes = range(len(shape) - 1, -1, -1) if order == "C" else range(len(shape))
    for k in axes:
        strides[k] = acc
        acc *= shape[k]
    return tuple(strides)


def _is_c_contiguous(shape, strides, byte_width) -> bool:
    acc = byte_width
    for d, s in zip(reversed(shape), reversed(strides)):
        if d == 0:
            return True
        if d != 1:
            if s != acc:
                return False
            acc *= d
    return True


class ArrayHandle:
    """A typed, strided view onto a shared byte buffer."""

    __slots__ = ("buffer", "offset", "elem_type", "shape", "strides", "writeable")

    def __init__(self, buffer, offset, elem_type, shape, strides, writeable=True):
        shape = tuple(shape)
        strides = tuple(strides)
        if len(shape) != len(strides):
            raise ShapeError(f"shape {shape} and strides {strides} differ in length")
        self.buffer = buffer
        self.offset = offset
        self.elem_type = elem_type
        self.shape = shape
        self.strides = strides
        self.writeable = writeable
        self._check_bounds()

    def _check_bounds(self):
        # every in-range index tuple must address a whole element in-buffer
        if element_count(self.shape) == 0:
            return
        lo = hi = self.offset
        for d, s in zip(self.shape, self.strides):
            if s >= 0:
                hi += (d - 1) * s
            else:
                lo += (d - 1) * s
        if lo < 0 or hi + self.elem_type.byte_width > len(self.buffer):
            raise ValueError(
                f"view exceeds buffer: offsets [{lo}, {hi + self.elem_type.byte_width}) "
                f"outside 0..{len(self.buffer)}"
            )

    # -- metadata ----------------------------------------------------------

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return element_count(self.shape)

    def is_c_contiguous(self) -> bool:
        return _is_c_contiguous(self.shape, self.strides, self.elem_type.byte_width)

    # -- scalar access -----------------------------------------------------

    def _addr(self, idx) -> int:
        if len(idx) != self.ndim:
            raise IndexError(f"index {idx!r} has wrong length for shape {self.shape}")
        off = self.offset
        for i, (d, s) in zip(idx, zip(self.shape, self.strides)):
            if i < 0:
                i += d
            if not 0 <= i < d:
                raise IndexError(f"index {idx!r} out of range for shape {self.shape}")
            off += i * s
        return off

    def get(self, idx=()):
        """Read the scalar at a full index tuple."""
        if isinstance(idx, int):
            idx = (idx,)
        return struct.unpack_from(self.elem_type.fmt, self.buffer, self._addr(idx))[0]

    def set(self, idx, value):
        """Write the scalar at a full index tuple (no implicit wrap-around)."""
        if isinstance(idx, int):
            idx = (idx,)
        if not self.writeable:
            raise ReadOnlyError("array is read-only")
        struct.pack_into(self.elem_type.fmt, self.buffer, self._addr(idx), _coerce(value, self.elem_type))

    def item(self):
        """The single element of a size-1 array as a Python scalar."""
        if self.size != 1:
            raise ValueError(f"item() requires exactly one element, shape is {self.shape}")
        idx = tuple(0 for _ in self.shape)
        return self.get(idx)

    def tolist(self):
        """Values as (nested) Python lists in C order; 0-d gives a scalar."""
        if self.ndim == 0:
            return self.get(())

        def build(axis, off):
            d = self.shape[axis]
            s = self.strides[axis]
            if axis == self.ndim - 1:
                u = struct.Struct(self.elem_type.fmt).unpack_from
                return [u(self.buffer, off + i * s)[0] for i in range(d)]
            return [build(axis + 1, off + i * s) for i in range(d)]

        return build(0, self.offset)

    # -- copies ------------------------------------------------------------

    def copy(self) -> "ArrayHandle":
        """Dense C-order copy with the same element type."""
        return self.astype(self.elem_type)

    def astype(self, elem_type: ElemType) -> "ArrayHandle":
        """Dense C-order copy cast to ``elem_type`` (same or wider only)."""
        if _RANK[elem_type] < _RANK[self.elem_type]:
            raise TypeError(f"cannot narrow {self.elem_type.label} to {elem_type.label}")
        out = empty(self.shape, elem_type)
        if self.size:
            kshape, kstrides = _kernel_dims(self.shape, self.strides)
            _K.copy_cast(
                out.buffer, elem_type.code, self.buffer, self.offset, kshape, kstrides, self.elem_type.code
            )
        return out

    # -- python sugar (thin wrappers over the library operations) ----------

    def __getitem__(self, spec):
        from . import indexing

        if isinstance(spec, ArrayHandle):
            if spec.elem_type is ElemType.BOOL:
                return indexing.boolean_select(self, spec)
            raise TypeError("array index must be a Bool mask; use gather() for integer lookups")
        return indexing.slice_view(self, spec)

    def __setitem__(self, spec, value):
        from . import indexing

        indexing.assign(self, spec, value)

    @property
    def T(self) -> "ArrayHandle":
        return transpose(self)

    def __add__(self, other):
        from . import dispatch

        return dispatch.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from . import dispatch

        return dispatch.sub(self, other)

    def __rsub__(self, other):
        from . import dispatch

        return dispatch.sub(other, self)

    def __mul__(self, other):
        from . import dispatch

        return dispatch.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from . import dispatch

        return dispatch.div(self, other)

    def __rtruediv__(self, other):
        from . import dispatch

        return dispatch.div(other, self)

    def __neg__(self):
        from . import dispatch

        return dispatch.neg(self)

    def __matmul__(self, other):
        from . import dispatch

        return dispatch.matmul(self, other)

    def __repr__(self):
        body = repr(self.tolist()) if self.size <= 24 else f"<{self.size} elements>"
        return f"ArrayHandle({body}, {self.elem_type.label}, shape={self.shape})"


class ReshapeResult(NamedTuple):
    """Reshape output plus whether it aliases the input buffer."""

    array: ArrayHandle
    is_view: bool


def _coerce(value, elem_type: ElemType):
    # conversions follow the promotion lattice: only same-or-wider accepted
    if elem_type is ElemType.BOOL:
        if not isinstance(value, bool):
            raise TypeError(f"bool element expected, got {type(value).__name__}")
        return value
    if elem_type is ElemType.INT64:
        if isinstance(value, bool):
            return int(value)
        if not isinstance(value, int):
            raise TypeError(f"int64 element expected, got {type(value).__name__}")
        if not _I64_MIN <= value <= _I64_MAX:
            raise ValueError(f"{value} out of int64 range")
        return value
    if not isinstance(value, (bool, int, float)):
        raise TypeError(f"float64 element expected, got {type(value).__name__}")
    return float(value)


def _kernel_dims(shape, strides):
    # kernels iterate at least one axis; fold the 0-d case into shape (1,)
    if shape == ():
        return (1,), (0,)
    return shape, strides


def infer_elem_type(values) -> ElemType:
    et = ElemType.BOOL
    for v in values:
        if isinstance(v, bool):
            continue
        if isinstance(v, int):
            et = promote(et, ElemType.INT64)
        elif isinstance(v, float):
            return ElemType.FLOAT64
        else:
            raise TypeError(f"cannot infer element type from {type(v).__name__}")
    return et


# -- constructors -----------------------------------------------------------


def empty(shape, elem_type: ElemType) -> ArrayHandle:
    """Dense C-contiguous array; elements start zeroed."""
    shape = check_shape(shape)
    n = element_count(shape)
    try:
        buf = bytearray(n * elem_type.byte_width)
    except (MemoryError, OverflowError) as exc:
        raise MemoryError(f"cannot allocate {n} x {elem_type.byte_width} bytes") from exc
    return ArrayHandle(buf, 0, elem_type, shape, compute_strides(shape, elem_type.byte_width))


def full(shape, fill_value, elem_type: ElemType | None = None) -> ArrayHandle:
    """Dense C-contiguous array with every element equal to ``fill_value``."""
    if elem_type is None:
        elem_type = infer_elem_type([fill_value])
    a = empty(shape, elem_type)
    if a.size:
        a.buffer[:] = struct.pack(elem_type.fmt, _coerce(fill_value, elem_type)) * a.size
    return a


def zeros(shape, elem_type: ElemType = ElemType.FLOAT64) -> ArrayHandle:
    return full(shape, False if elem_type is ElemType.BOOL else 0, elem_type)


def ones(shape, elem_type: ElemType = ElemType.FLOAT64) -> ArrayHandle:
    return full(shape, True if elem_type is ElemType.BOOL else 1, elem_type)


def from_values(values: Sequence, shape=None, elem_type: ElemType | None = None) -> ArrayHandle:
    """Array from a flat list of scalars laid out in C order."""
    values = list(values)
    if shape is None:
        shape = (len(values),)
    shape = check_shape(shape)
    if len(values) != element_count(shape):
        raise ShapeError(f"{len(values)} values do not fill shape {shape}")
    if elem_type is None:
        elem_type = infer_elem_type(values) if values else ElemType.FLOAT64
    a = empty(shape, elem_type)
    if values:
        coerced = [_coerce(v, elem_type) for v in values]
        struct.pack_into(f"{elem_type.fmt[0]}{len(values)}{elem_type.fmt[1]}", a.buffer, 0, *coerced)
    return a


def scalar(value, elem_type: ElemType | None = None) -> ArrayHandle:
    """Zero-dimensional array holding one value."""
    return from_values([value], (), elem_type)


def as_array(x) -> ArrayHandle:
    """Pass arrays through; wrap Python scalars as 0-d arrays."""
    if isinstance(x, ArrayHandle):
        return x
    if isinstance(x, (bool, int, float)):
        return scalar(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a dense array")


def arange(start, stop=None, step=1.0) -> ArrayHandle:
    """Float64 range [start, start+step, ...) of length max(0, ceil((stop-start)/step))."""
    if stop is None:
        start, stop = 0.0, start
    start, stop, step = float(start), float(stop), float(step)
    if step == 0.0:
        raise ValueError("arange step must be nonzero")
    n = max(0, math.ceil((stop - start) / step))
    return from_values([start + i * step for i in range(n)], (n,), ElemType.FLOAT64)


# -- shape manipulation ------------------------------------------------------


def reshape(a: ArrayHandle, new_shape) -> ReshapeResult:
    """Reinterpret in C order: a view when the input is C-contiguous, else a copy."""
    new_shape = check_shape(new_shape)
    if element_count(new_shape) != a.size:
        raise ShapeError(f"cannot reshape {a.shape} ({a.size} elements) into {new_shape}")
    if a.is_c_contiguous():
        view = ArrayHandle(
            a.buffer,
            a.offset,
            a.elem_type,
            new_shape,
            compute_strides(new_shape, a.elem_type.byte_width),
            writeable=a.writeable,
        )
        return ReshapeResult(view, True)
    copy = a.copy()
    return ReshapeResult(
        ArrayHandle(
            copy.buffer,
            0,
            a.elem_type,
            new_shape,
            compute_strides(new_shape, a.elem_type.byte_width),
        ),
        False,
    )


def transpose(a: ArrayHandle, perm=None) -> ArrayHandle:
    """View with axes permuted (default: reversed); no data movement."""
    if perm is None:
        perm = tuple(range(a.ndim - 1, -1, -1))
    perm = tuple(perm)
    if sorted(perm) != list(range(a.ndim)):
        raise ValueError(f"{perm!r} is not a permutation of 0..{a.ndim - 1}")
    return ArrayHandle(
        a.buffer,
        a.offset,
        a.elem_type,
        tuple(a.shape[p] for p in perm),
        tuple(a.strides[p] for p in perm),
        writeable=a.writeable,
    )


def allclose(actual, desired, rtol: float = 1e-7, atol: float = 0.0) -> bool:
    """Elementwise |a - d| <= atol + rtol*|d| over broadcast operands.

    NaN never compares close; by the same literal rule neither do infinities.
    """
    from .broadcasting import broadcast_shapes, broadcast_to

    import itertools

    a = as_array(actual)
    d = as_array(desired)
    shape = broadcast_shapes(a.shape, d.shape)
    av = broadcast_to(a, shape)
    dv = broadcast_to(d, shape)
    for idx in itertools.product(*[range(x) for x in shape]):
        x = float(av.get(idx))
        y = float(dv.get(idx))
        if not abs(x - y) <= atol + rtol * abs(y):
            return False
    return True
