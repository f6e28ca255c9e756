"""Bit-exact array serialization: the NDAR v1 container.

Layout, all little-endian:

    magic     4 bytes   b"NDAR"
    version   1 byte    1
    elem_code 1 byte    0=Bool, 1=Int64, 2=Float64
    ndim      1 byte
    order     1 byte    0 = C (the only value in v1)
    dims      ndim x u64
    payload   element_count * byte_width raw elements in C order

Views are materialized on save, so identical logical arrays serialize to
identical bytes; save(load(save(x))) is a byte-level fixed point.
"""

from __future__ import annotations

import io
import struct
from os import PathLike

from .core import ArrayHandle, ElemType, compute_strides, element_count
from .errors import FormatError

MAGIC = b"NDAR"
VERSION = 1
ORDER_C = 0


def _header(elem_type: ElemType, shape) -> bytes:
    return MAGIC + struct.pack(
        "<BBBB", VERSION, elem_type.code, len(shape), ORDER_C
    ) + struct.pack(f"<{len(shape)}Q", *shape)


def save(a: ArrayHandle, sink) -> None:
    """Write header plus densely packed C-order elements."""
    if isinstance(sink, (str, PathLike)):
        with open(sink, "wb") as fh:
            save(a, fh)
        return
    if a.ndim > 255:
        raise FormatError("ndar v1 headers cap ndim at 255")
    dense = a if (a.is_c_contiguous() and a.offset == 0 and len(a.buffer) == a.size * a.elem_type.byte_width) else a.copy()
    sink.write(_header(a.elem_type, a.shape))
    sink.write(bytes(dense.buffer))


def _read_exact(source, n: int, what: str) -> bytes:
    data = source.read(n)
    if len(data) != n:
        raise FormatError(f"truncated {what}: wanted {n} bytes, got {len(data)}")
    return data


def load(source) -> ArrayHandle:
    """Parse one array; any malformed input raises :class:`FormatError`."""
    if isinstance(source, (str, PathLike)):
        with open(source, "rb") as fh:
            return load(fh)
    if isinstance(source, (bytes, bytearray)):
        return load(io.BytesIO(source))

    magic = _read_exact(source, 4, "magic")
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version, elem_code, ndim, order = struct.unpack("<BBBB", _read_exact(source, 4, "header"))
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    try:
        elem_type = ElemType.from_code(elem_code)
    except ValueError:
        raise FormatError(f"unsupported element-type code {elem_code}") from None
    if order != ORDER_C:
        raise FormatError(f"unsupported order byte {order}")
    dims = struct.unpack(f"<{ndim}Q", _read_exact(source, 8 * ndim, "dims"))
    count = element_count(dims)
    payload_len = count * elem_type.byte_width
    if payload_len > (1 << 40):
        raise FormatError(f"declared payload of {payload_len} bytes is implausible")
    payload = _read_exact(source, payload_len, "payload")
    trailing = source.read(1)
    if trailing:
        raise FormatError("trailing bytes after payload")
    return ArrayHandle(
        bytearray(payload),
        0,
        elem_type,
        dims,
        compute_strides(dims, elem_type.byte_width),
    )
