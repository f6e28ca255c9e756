"""Chunked arrays: the reference foreign backend for the dispatch protocol.

A :class:`ChunkedArray` stores an ordered list of pieces split along axis 0;
pieces are dense handles or themselves protocol participants (chunked inside
chunked composes).  Handlers are eager: reductions run per chunk and combine
in chunk-index order, elementwise ops map over chunks with a dense peer
sliced to match.  Every handler returns a ChunkedArray, never a silently
densified result.
"""

from __future__ import annotations

from . import ufuncs
from .broadcasting import broadcast_shapes
from .core import ArrayHandle, as_array, empty, promote, reshape
from .dispatch import ELEMENTWISE_FUNCS, ArrayBackend, FuncId, dispatch_call
from .errors import ChunkLayoutError, DispatchError
from .indexing import assign, slice_view
from .ufuncs import UfuncId, normalize_axes


class ChunkedArray:
    """Pieces split along axis 0 with a consistent trailing shape."""

    def __init__(self, chunks):
        chunks = list(chunks)
        if not chunks:
            raise ValueError("a chunked array needs at least one chunk")
        for c in chunks:
            if not hasattr(c, "shape"):
                raise TypeError(f"chunks must be array-like, got {type(c).__name__}")
        shapes = [tuple(c.shape) for c in chunks]
        if shapes[0] == ():
            if len(chunks) != 1:
                raise ChunkLayoutError("a 0-d chunked array must hold exactly one chunk")
            self._shape = ()
        else:
            trailing = shapes[0][1:]
            for s in shapes:
                if len(s) != len(shapes[0]) or s[1:] != trailing:
                    raise ChunkLayoutError(f"chunk shapes disagree on trailing axes: {shapes}")
            self._shape = (sum(s[0] for s in shapes),) + trailing
        self.chunks = chunks

    @property
    def shape(self) -> tuple:
        return self._shape

    @property
    def ndim(self) -> int:
        return len(self._shape)

    @property
    def extents(self) -> list:
        """Axis-0 extent of each chunk (the chunk layout)."""
        return [] if self._shape == () else [c.shape[0] for c in self.chunks]

    def __repr__(self):
        return f"ChunkedArray(shape={self._shape}, extents={self.extents})"


def chunked_from_dense(a: ArrayHandle, chunk_len: int) -> ChunkedArray:
    """Split a dense array into views of ``chunk_len`` rows (last may be shorter)."""
    if not isinstance(chunk_len, int) or chunk_len <= 0:
        raise ValueError(f"chunk_len must be a positive int, got {chunk_len!r}")
    if a.ndim == 0:
        raise ValueError("cannot chunk a 0-d array")
    n = a.shape[0]
    if n == 0:
        return ChunkedArray([slice_view(a, (slice(0, 0),))])
    chunks = [slice_view(a, (slice(r, min(r + chunk_len, n)),)) for r in range(0, n, chunk_len)]
    return ChunkedArray(chunks)


def to_dense(x) -> ArrayHandle:
    """Concatenate chunks along axis 0, recursing through nested chunked values."""
    if isinstance(x, ArrayHandle):
        return x
    if not isinstance(x, ChunkedArray):
        raise TypeError(f"cannot convert {type(x).__name__} to a dense array")
    parts = [to_dense(c) for c in x.chunks]
    if x.ndim == 0:
        return parts[0].copy()
    elem_type = parts[0].elem_type
    for p in parts[1:]:
        elem_type = promote(elem_type, p.elem_type)
    out = empty(x.shape, elem_type)
    row = 0
    for p in parts:
        if p.size:
            assign(out, (slice(row, row + p.shape[0]),), p)
        row += p.shape[0]
    return out


def _wrap(value) -> ChunkedArray:
    if isinstance(value, ChunkedArray):
        return value
    return ChunkedArray([value])


def _elementwise_chunked(func: FuncId, args: tuple) -> ChunkedArray:
    uf = ELEMENTWISE_FUNCS[func]
    if uf.arity == 1:
        x = args[0]
        if not isinstance(x, ChunkedArray):
            raise DispatchError(f"chunked backend got a non-chunked operand for {func.value!r}")
        return ChunkedArray([dispatch_call(func, (c,)) for c in x.chunks])

    a, b = args
    # a 0-d chunked operand acts as a plain scalar peer
    if isinstance(a, ChunkedArray) and a.ndim == 0:
        a = to_dense(a)
    if isinstance(b, ChunkedArray) and b.ndim == 0:
        b = to_dense(b)
    if isinstance(a, ChunkedArray) and isinstance(b, ChunkedArray):
        if a.ndim != b.ndim or a.extents != b.extents:
            raise ChunkLayoutError(
                f"binary chunked operands need identical chunk layouts: {a.extents} vs {b.extents}"
            )
        return ChunkedArray(
            [dispatch_call(func, (ca, cb)) for ca, cb in zip(a.chunks, b.chunks)]
        )
    if not isinstance(a, ChunkedArray) and not isinstance(b, ChunkedArray):
        return _wrap(dispatch_call(func, (a, b)))

    chunked_first = isinstance(a, ChunkedArray)
    x = a if chunked_first else b
    peer = b if chunked_first else a
    if not isinstance(peer, ArrayHandle):
        try:
            peer = as_array(peer)
        except TypeError:
            raise DispatchError(
                f"chunked backend cannot pair {func.value!r} with {type(peer).__name__}"
            ) from None
    broadcast_shapes(x.shape, peer.shape)  # raises on true incompatibility
    if peer.ndim > x.ndim:
        raise DispatchError(
            f"chunked backend cannot broadcast {func.value!r} over new leading axes "
            f"({x.shape} with peer {peer.shape})"
        )
    # x has ndim >= 1 here (0-d chunked operands were densified above)
    slice_peer = peer.ndim == x.ndim and peer.shape[0] == x.shape[0] and x.shape[0] != 1
    out = []
    row = 0
    for c in x.chunks:
        p = slice_view(peer, (slice(row, row + c.shape[0]),)) if slice_peer else peer
        row += c.shape[0]
        out.append(dispatch_call(func, (c, p) if chunked_first else (p, c)))
    return ChunkedArray(out)


def _reduce_chunked(func: FuncId, args: tuple, kwargs: dict) -> ChunkedArray:
    x = args[0]
    if not isinstance(x, ChunkedArray):
        raise DispatchError(f"chunked backend got a non-chunked operand for {func.value!r}")
    axes = normalize_axes(x.ndim, kwargs.get("axes"))
    keepdims = bool(kwargs.get("keepdims", False))

    if x.ndim == 0 or 0 not in axes:
        # chunks keep their rows: reduce each independently, layout preserved
        per = {"axes": axes, "keepdims": keepdims}
        return ChunkedArray([dispatch_call(func, (c,), per) for c in x.chunks])

    # axis 0 reduced: per-chunk partial sums combined in chunk order; a mean
    # is the combined sum over the combined count (exact weighted combine)
    per = {"axes": axes, "keepdims": False}
    partials = [to_dense(dispatch_call(FuncId.SUM, (c,), per)) for c in x.chunks]
    combined = partials[0]
    for p in partials[1:]:
        combined = ufuncs.elementwise(UfuncId.ADD, combined, p)
    if func is FuncId.MEAN:
        count = 1
        for ax in axes:
            count *= x.shape[ax]
        combined = ufuncs.elementwise(UfuncId.DIV, combined, float(count))
    if keepdims:
        shape = tuple(1 if k in axes else d for k, d in enumerate(x.shape))
        combined = reshape(combined, shape).array
    return _wrap(combined)


class _ChunkedBackend(ArrayBackend):
    name = "chunked"

    _HANDLED = frozenset(ELEMENTWISE_FUNCS) | {FuncId.SUM, FuncId.MEAN}

    def handles(self, func: FuncId) -> bool:
        return func in self._HANDLED

    def call(self, func: FuncId, args: tuple, kwargs: dict):
        if func in (FuncId.SUM, FuncId.MEAN):
            return _reduce_chunked(func, args, kwargs)
        return _elementwise_chunked(func, args)


ChunkedArray.array_backend = _ChunkedBackend()
