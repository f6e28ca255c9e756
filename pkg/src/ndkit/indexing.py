"""Basic indexing (views) and advanced indexing (copies).

Index specs are per-axis entries: an ``int`` (drops the axis), a ``slice``
(keeps it, clamping out-of-range bounds), or implicit full slices for missing
trailing axes.  Mixing array indices with basic entries in one spec is
rejected; boolean masks and integer-array gathers are separate operations
that always copy.
"""

from __future__ import annotations

from itertools import product

from .broadcasting import broadcast_shapes, broadcast_to
from .core import ArrayHandle, ElemType, _RANK, as_array, empty, from_values
from .errors import BroadcastError, ReadOnlyError


def _entries(a: ArrayHandle, spec):
    if not isinstance(spec, tuple):
        spec = (spec,)
    if len(spec) > a.ndim:
        raise IndexError(f"too many indices ({len(spec)}) for shape {a.shape}")
    for e in spec:
        if isinstance(e, (ArrayHandle, list)):
            raise TypeError("array indices cannot be mixed with basic indexing entries")
        if not isinstance(e, (int, slice)) or isinstance(e, bool):
            raise TypeError(f"index entries must be int or slice, got {type(e).__name__}")
    return spec + (slice(None),) * (a.ndim - len(spec))


def slice_view(a: ArrayHandle, spec) -> ArrayHandle:
    """View selected by ints and slices; shares the buffer with ``a``."""
    offset = a.offset
    shape = []
    strides = []
    for e, dim, st in zip(_entries(a, spec), a.shape, a.strides):
        if isinstance(e, int):
            i = e + dim if e < 0 else e
            if not 0 <= i < dim:
                raise IndexError(f"index {e} out of range for axis of extent {dim}")
            offset += i * st
        else:
            start, stop, step = e.indices(dim)
            n = len(range(start, stop, step))
            shape.append(n)
            strides.append(step * st)
            if n:
                offset += start * st
    return ArrayHandle(a.buffer, offset, a.elem_type, shape, strides, writeable=a.writeable)


def boolean_select(a: ArrayHandle, mask: ArrayHandle) -> ArrayHandle:
    """1-d copy of elements where ``mask`` is true, in row-major order."""
    if not isinstance(mask, ArrayHandle) or mask.elem_type is not ElemType.BOOL:
        raise TypeError("mask must be a Bool array")
    if mask.shape != a.shape:
        raise IndexError(f"mask shape {mask.shape} does not match array shape {a.shape}")
    picked = []
    for idx in product(*[range(d) for d in a.shape]):
        if mask.get(idx):
            picked.append(a.get(idx))
    return from_values(picked, (len(picked),), a.elem_type)


def gather(a: ArrayHandle, index_arrays) -> ArrayHandle:
    """Pointwise lookup a[i1[t], ..., in[t]] over broadcast index arrays.

    Requires one Int64 index array per axis; the result is a copy whose shape
    is the broadcast shape of the index arrays.
    """
    index_arrays = list(index_arrays)
    if len(index_arrays) != a.ndim:
        raise IndexError(f"need {a.ndim} index arrays for shape {a.shape}, got {len(index_arrays)}")
    for ia in index_arrays:
        if not isinstance(ia, ArrayHandle) or ia.elem_type is not ElemType.INT64:
            raise TypeError("gather index arrays must be Int64 arrays")
    shape = ()
    for ia in index_arrays:
        shape = broadcast_shapes(shape, ia.shape)
    views = [broadcast_to(ia, shape) for ia in index_arrays]
    out = empty(shape, a.elem_type)
    for t in product(*[range(d) for d in shape]):
        idx = []
        for axis, v in enumerate(views):
            i = v.get(t)
            if i < 0:
                i += a.shape[axis]
            if not 0 <= i < a.shape[axis]:
                raise IndexError(f"gathered index {v.get(t)} out of range for axis {axis} of extent {a.shape[axis]}")
            idx.append(i)
        out.set(t, a.get(tuple(idx)))
    return out


def assign(a: ArrayHandle, spec, values) -> None:
    """Write ``values``, broadcast to the selected view, through to ``a``."""
    view = slice_view(a, spec)
    if not view.writeable:
        raise ReadOnlyError("cannot assign through a read-only view")
    values = as_array(values)
    if _RANK[values.elem_type] > _RANK[a.elem_type]:
        raise TypeError(f"cannot assign {values.elem_type.label} values into {a.elem_type.label} array")
    src = broadcast_to(values, broadcast_shapes(values.shape, view.shape))
    if src.shape != view.shape:
        raise BroadcastError(f"values of shape {values.shape} overflow the selected shape {view.shape}")
    convert = a.elem_type is not values.elem_type
    for idx in product(*[range(d) for d in view.shape]):
        v = src.get(idx)
        if convert:
            v = float(v) if a.elem_type is ElemType.FLOAT64 else int(v)
        view.set(idx, v)
