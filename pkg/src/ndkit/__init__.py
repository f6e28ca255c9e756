"""ndkit: a self-contained strided array kernel.

Dense n-dimensional arrays over shared byte buffers (views, broadcasting,
elementwise kernels, reductions, matmul), a dispatch protocol that lets
foreign array types intercept the public functions, a component-based random
number architecture, and a bit-exact file format.  Hot loops run in a
compiled extension when available and fall back to pure Python otherwise
(``ndkit.kernel_backend()`` reports which).
"""

from ._kernels import backend_name as kernel_backend
from .broadcasting import broadcast_shapes, broadcast_to
from .chunked import ChunkedArray, chunked_from_dense, to_dense
from .core import (
    BOOL,
    FLOAT64,
    INT64,
    ArrayHandle,
    ElemType,
    ReshapeResult,
    allclose,
    arange,
    as_array,
    compute_strides,
    element_count,
    empty,
    from_values,
    full,
    ones,
    scalar,
    zeros,
)
from .dispatch import (
    ArrayBackend,
    FuncId,
    add,
    arctan2,
    dispatch_call,
    div,
    exp,
    log,
    matmul,
    maximum,
    mean,
    mul,
    neg,
    reshape,
    sin,
    sub,
    sum,
    transpose,
)
from .errors import (
    BroadcastError,
    ChunkLayoutError,
    DispatchError,
    FormatError,
    ReadOnlyError,
    ReductionError,
    ShapeError,
    TableError,
)
from .indexing import assign, boolean_select, gather, slice_view
from .ndar import load, save
from .random import (
    MT19937,
    PCG64,
    BitGenerator,
    ScriptedBitGenerator,
    SeedSequence,
    VariateGenerator,
    default_generator,
)
from .ufuncs import UfuncId, elementwise, reduce

__version__ = "0.1.0"

__all__ = [
    "ArrayHandle",
    "ElemType",
    "BOOL",
    "INT64",
    "FLOAT64",
    "ReshapeResult",
    "allclose",
    "arange",
    "as_array",
    "broadcast_shapes",
    "broadcast_to",
    "compute_strides",
    "element_count",
    "empty",
    "from_values",
    "full",
    "ones",
    "scalar",
    "zeros",
    "slice_view",
    "boolean_select",
    "gather",
    "assign",
    "UfuncId",
    "elementwise",
    "reduce",
    "add",
    "sub",
    "mul",
    "div",
    "arctan2",
    "maximum",
    "sin",
    "log",
    "exp",
    "neg",
    "sum",
    "mean",
    "matmul",
    "reshape",
    "transpose",
    "FuncId",
    "ArrayBackend",
    "dispatch_call",
    "ChunkedArray",
    "chunked_from_dense",
    "to_dense",
    "SeedSequence",
    "BitGenerator",
    "PCG64",
    "MT19937",
    "ScriptedBitGenerator",
    "VariateGenerator",
    "default_generator",
    "save",
    "load",
    "kernel_backend",
    "ShapeError",
    "BroadcastError",
    "ReadOnlyError",
    "ReductionError",
    "DispatchError",
    "ChunkLayoutError",
    "FormatError",
    "TableError",
]
