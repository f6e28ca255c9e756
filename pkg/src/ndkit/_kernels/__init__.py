"""Kernel backend selection.

The hot inner loops (elementwise ops, reductions, matmul, bit-generator and
distribution fills) exist twice: a compiled Cython module ``_fast`` and a
pure-Python mirror ``_pure``.  Both expose the same names and must produce
bit-identical results; ``benchmarks/compare_backends.py`` times them against
each other.  Set ``NDKIT_PURE=1`` to force the pure backend.
"""

import os

from . import _pure

# opcodes shared by both backends (values mirrored in _fast.pyx)
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

if os.environ.get("NDKIT_PURE"):
    kernels = _pure
    BACKEND = "pure"
else:
    try:
        from . import _fast

        kernels = _fast
        BACKEND = "compiled"
    except ImportError:
        kernels = _pure
        BACKEND = "pure"


def backend_name() -> str:
    return BACKEND
