"""Vectorized elementwise machinery, multi-axis reductions, and matmul.

Every operation allocates a fresh C-contiguous output.  Invalid floating
operations follow IEEE semantics (1/0 -> inf, log(-1) -> NaN) rather than
raising; Int64 arithmetic wraps modulo 2**64.  When the trailing-axis strides
of all operands equal the element width the kernels run a tight contiguous
inner loop, otherwise a general strided loop.
"""

from __future__ import annotations

import enum
import struct
from itertools import product

from . import _kernels
from ._kernels import kernels as _K
from .broadcasting import broadcast_shapes, broadcast_strides
from .core import ArrayHandle, ElemType, _kernel_dims, as_array, empty, promote, reshape, scalar
from .errors import ReductionError, ShapeError


class UfuncId(enum.Enum):
    """Elementwise kernel ids: (label, arity, opcode, identity, float result)."""

    ADD = ("add", 2, _kernels.OP_ADD, 0, False)
    SUB = ("sub", 2, _kernels.OP_SUB, None, False)
    MUL = ("mul", 2, _kernels.OP_MUL, 1, False)
    DIV = ("div", 2, _kernels.OP_DIV, None, True)
    ARCTAN2 = ("arctan2", 2, _kernels.OP_ATAN2, None, True)
    MAXIMUM = ("maximum", 2, _kernels.OP_MAX, None, False)
    SIN = ("sin", 1, _kernels.OP_SIN, None, True)
    LOG = ("log", 1, _kernels.OP_LOG, None, True)
    EXP = ("exp", 1, _kernels.OP_EXP, None, True)
    NEG = ("neg", 1, _kernels.OP_NEG, None, False)
    MATMUL = ("matmul", 2, -1, None, True)

    def __init__(self, label, arity, opcode, identity, forces_float):
        self.label = label
        self.arity = arity
        self.opcode = opcode
        self.identity = identity
        self.forces_float = forces_float


REDUCE_OPS = (UfuncId.ADD, UfuncId.MUL, UfuncId.MAXIMUM)


def result_type(op: UfuncId, a: ElemType, b: ElemType | None = None) -> ElemType:
    if op.forces_float:
        return ElemType.FLOAT64
    out = a if b is None else promote(a, b)
    # arithmetic on booleans counts in Int64
    return ElemType.INT64 if out is ElemType.BOOL else out


def _as_computation(a: ArrayHandle, elem_type: ElemType) -> ArrayHandle:
    return a if a.elem_type is elem_type else a.astype(elem_type)


def _stretched(v: ArrayHandle, shape) -> tuple:
    """Strides of ``v`` adjusted to the broadcast ``shape``, 0-d normalized."""
    strides = broadcast_strides(v.shape, v.strides, shape)
    return strides if shape else (0,)


def elementwise(op: UfuncId, a, b=None) -> ArrayHandle:
    """Apply ``op`` pointwise over broadcast operands."""
    if op is UfuncId.MATMUL:
        raise ValueError("matmul is not an elementwise operation")
    a = as_array(a)
    if op.arity == 2:
        if b is None:
            raise TypeError(f"{op.label} expects two operands")
        b = as_array(b)
        out_type = result_type(op, a.elem_type, b.elem_type)
        shape = broadcast_shapes(a.shape, b.shape)
        out = empty(shape, out_type)
        if out.size == 0:
            return out
        av = _as_computation(a, out_type)
        bv = _as_computation(b, out_type)
        _K.elementwise2(
            op.opcode,
            out_type.code,
            out.buffer,
            av.buffer,
            av.offset,
            _stretched(av, shape),
            bv.buffer,
            bv.offset,
            _stretched(bv, shape),
            shape if shape else (1,),
        )
        return out
    if b is not None:
        raise TypeError(f"{op.label} expects one operand")
    out_type = result_type(op, a.elem_type)
    out = empty(a.shape, out_type)
    if out.size == 0:
        return out
    av = _as_computation(a, out_type)
    kshape, kstrides = _kernel_dims(av.shape, av.strides)
    _K.elementwise1(op.opcode, out_type.code, out.buffer, av.buffer, av.offset, kstrides, kshape)
    return out


def normalize_axes(ndim: int, axes) -> tuple:
    """Axes as a sorted tuple; None means all, an empty iterable means none."""
    if axes is None:
        return tuple(range(ndim))
    if isinstance(axes, int):
        axes = [axes]
    axes = list(axes)
    norm = []
    for ax in axes:
        if not isinstance(ax, int) or isinstance(ax, bool):
            raise TypeError(f"axis must be an int, got {type(ax).__name__}")
        if ax < 0:
            ax += ndim
        if not 0 <= ax < ndim:
            raise ValueError(f"axis {ax} out of range for {ndim} dimensions")
        norm.append(ax)
    if len(set(norm)) != len(norm):
        raise ValueError(f"duplicate reduction axes in {tuple(axes)}")
    return tuple(sorted(norm))


def reduce(op: UfuncId, a: ArrayHandle, axes=None, keepdims: bool = False) -> ArrayHandle:
    """Fold ``op`` over the given axes; an n-d input reduced over d axes is (n-d)-d."""
    if op not in REDUCE_OPS:
        raise ValueError(f"{op.label} is not a reduction operation")
    a = as_array(a)
    axes = normalize_axes(a.ndim, axes)
    out_type = result_type(op, a.elem_type)
    av = _as_computation(a, out_type)
    if not axes:
        # reduction over no axes: a copy (promoted for a consistent result type)
        return av.copy()
    red_count = 1
    for ax in axes:
        red_count *= a.shape[ax]
    if op is UfuncId.MAXIMUM and red_count == 0:
        raise ReductionError("maximum over an empty extent has no identity")
    keep = [k for k in range(a.ndim) if k not in axes]
    keep_shape = tuple(av.shape[k] for k in keep)
    keep_strides = tuple(av.strides[k] for k in keep)
    red_shape = tuple(av.shape[k] for k in axes)
    red_strides = tuple(av.strides[k] for k in axes)
    out = empty(keep_shape, out_type)
    if out.size:
        if red_count == 0:
            # identity fill (only add/mul reach here)
            ident = op.identity
            val = float(ident) if out_type is ElemType.FLOAT64 else int(ident)
            out.buffer[:] = struct.pack(out_type.fmt, val) * out.size
        elif not keep_shape and av.is_c_contiguous():
            val = _K.reduce_flat(op.opcode, out_type.code, av.buffer, av.offset, av.size)
            out.set((), val)
        else:
            _K.reduce_fold(
                op.opcode,
                out_type.code,
                out.buffer,
                av.buffer,
                av.offset,
                _kernel_dims(keep_shape, keep_strides)[0],
                _kernel_dims(keep_shape, keep_strides)[1],
                _kernel_dims(red_shape, red_strides)[0],
                _kernel_dims(red_shape, red_strides)[1],
            )
    if keepdims:
        new_shape = tuple(1 if k in axes else d for k, d in enumerate(a.shape))
        return reshape(out, new_shape).array
    return out


def array_sum(a, axes=None, keepdims: bool = False) -> ArrayHandle:
    return reduce(UfuncId.ADD, a, axes, keepdims)


def mean(a, axes=None, keepdims: bool = False) -> ArrayHandle:
    """Reduce-add divided by the reduced element count; always Float64."""
    a = as_array(a)
    axes_t = normalize_axes(a.ndim, axes)
    total = reduce(UfuncId.ADD, a.astype(ElemType.FLOAT64), axes_t, keepdims)
    count = 1
    for ax in axes_t:
        count *= a.shape[ax]
    return elementwise(UfuncId.DIV, total, scalar(float(count)))


def matmul(a, b) -> ArrayHandle:
    """(m,k) @ (k,n) -> (m,n) product in Float64."""
    a = as_array(a)
    b = as_array(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul needs 2-d operands, got {a.shape} and {b.shape}")
    m, k = a.shape
    k2, n = b.shape
    if k != k2:
        raise ShapeError(f"matmul inner dimensions differ: {a.shape} vs {b.shape}")
    af = a.astype(ElemType.FLOAT64)
    bf = b.astype(ElemType.FLOAT64)
    out = empty((m, n), ElemType.FLOAT64)
    if out.size and k:
        _K.matmul_f64(out.buffer, af.buffer, bf.buffer, m, k, n)
    return out


def per_index_sum(a: ArrayHandle) -> float:
    """Element-at-a-time sum through the generic per-index lookup path.

    Deliberately naive; the benchmark baseline against the reduce kernel.
    """
    acc = 0.0
    get = a.get
    for idx in product(*[range(d) for d in a.shape]):
        acc += get(idx)
    return acc
