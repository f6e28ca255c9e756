"""Shape-compatibility algebra: virtual duplication of axes without copying."""

from __future__ import annotations

from .core import ArrayHandle
from .errors import BroadcastError


def _combine(d1: int, d2: int, s1, s2) -> int:
    if d1 == d2:
        return d1
    if d1 == 1:
        return d2
    if d2 == 1:
        return d1
    raise BroadcastError(f"shapes {s1} and {s2} are not broadcast-compatible")


def broadcast_shapes(s1, s2) -> tuple:
    """Right-align two shapes; dims must be equal or 1 (or absent)."""
    s1 = tuple(s1)
    s2 = tuple(s2)
    n = max(len(s1), len(s2))
    out = []
    for k in range(n):
        d1 = s1[len(s1) - n + k] if len(s1) - n + k >= 0 else 1
        d2 = s2[len(s2) - n + k] if len(s2) - n + k >= 0 else 1
        out.append(_combine(d1, d2, s1, s2))
    return tuple(out)


def broadcast_strides(shape, strides, target) -> tuple:
    """Strides of ``shape`` stretched over ``target``: 0 on duplicated axes."""
    pad = len(target) - len(shape)
    out = [0] * len(target)
    for k, (d, s) in enumerate(zip(shape, strides)):
        t = target[pad + k]
        if d == t:
            out[pad + k] = s
        elif d == 1:
            out[pad + k] = 0
        else:
            raise BroadcastError(f"cannot broadcast shape {tuple(shape)} to {tuple(target)}")
    return tuple(out)


def broadcast_to(a: ArrayHandle, target) -> ArrayHandle:
    """Read-only view of ``a`` stretched to ``target`` without copying.

    Duplicated and prepended axes get stride 0, so one stored element backs
    many logical positions; that aliasing is why the result rejects writes.
    """
    target = tuple(target)
    if broadcast_shapes(a.shape, target) != target:
        raise BroadcastError(f"cannot broadcast shape {a.shape} to {target}")
    return ArrayHandle(
        a.buffer,
        a.offset,
        a.elem_type,
        target,
        broadcast_strides(a.shape, a.strides, target),
        writeable=False,
    )
