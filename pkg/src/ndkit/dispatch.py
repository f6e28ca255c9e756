"""Backend dispatch: front-door functions that foreign arrays can intercept.

Every public array function routes through :func:`dispatch_call`.  Arguments
are scanned left to right; the first value carrying an ``array_backend``
capability record whose ``handles`` answers true receives the call and may
return its own kind.  Dense handles and plain scalars never trigger
delegation.  If foreign values are present but none of their backends handles
the function, a :class:`DispatchError` names the function and the backends.
"""

from __future__ import annotations

import enum
import types

from . import core, ufuncs
from .core import ArrayHandle, as_array
from .errors import DispatchError
from .ufuncs import UfuncId


class FuncId(enum.Enum):
    """Identifiers of the front-door functions covered by the protocol."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    ARCTAN2 = "arctan2"
    MAXIMUM = "maximum"
    SIN = "sin"
    LOG = "log"
    EXP = "exp"
    NEG = "neg"
    SUM = "sum"
    MEAN = "mean"
    MATMUL = "matmul"
    RESHAPE = "reshape"
    TRANSPOSE = "transpose"


ELEMENTWISE_FUNCS = {
    FuncId.ADD: UfuncId.ADD,
    FuncId.SUB: UfuncId.SUB,
    FuncId.MUL: UfuncId.MUL,
    FuncId.DIV: UfuncId.DIV,
    FuncId.ARCTAN2: UfuncId.ARCTAN2,
    FuncId.MAXIMUM: UfuncId.MAXIMUM,
    FuncId.SIN: UfuncId.SIN,
    FuncId.LOG: UfuncId.LOG,
    FuncId.EXP: UfuncId.EXP,
    FuncId.NEG: UfuncId.NEG,
}


class ArrayBackend:
    """Capability record a backend attaches to its values.

    Values participate in dispatch by exposing one of these as their
    ``array_backend`` attribute.  ``call`` is only invoked for functions
    where ``handles`` answered true.
    """

    name = "abstract"

    def handles(self, func: FuncId) -> bool:
        raise NotImplementedError

    def call(self, func: FuncId, args: tuple, kwargs: dict):
        raise NotImplementedError


def backend_of(value) -> ArrayBackend | None:
    if isinstance(value, (ArrayHandle, bool, int, float)):
        return None
    return getattr(value, "array_backend", None)


def _make_reference_table() -> types.MappingProxyType:
    table = {}
    for func, uf in ELEMENTWISE_FUNCS.items():
        if uf.arity == 2:
            table[func] = lambda a, b, _uf=uf: ufuncs.elementwise(_uf, as_array(a), as_array(b))
        else:
            table[func] = lambda a, _uf=uf: ufuncs.elementwise(_uf, as_array(a))
    table[FuncId.SUM] = lambda a, axes=None, keepdims=False: ufuncs.array_sum(as_array(a), axes, keepdims)
    table[FuncId.MEAN] = lambda a, axes=None, keepdims=False: ufuncs.mean(as_array(a), axes, keepdims)
    table[FuncId.MATMUL] = lambda a, b: ufuncs.matmul(as_array(a), as_array(b))
    table[FuncId.RESHAPE] = lambda a, shape: core.reshape(as_array(a), shape)
    table[FuncId.TRANSPOSE] = lambda a, perm=None: core.transpose(as_array(a), perm)
    return types.MappingProxyType(table)


# immutable after startup; dispatch reads it concurrently without locking
REFERENCE_IMPLS = _make_reference_table()


def dispatch_call(func: FuncId, args: tuple, kwargs: dict | None = None):
    """Delegate to the first capable foreign backend, else run the dense path."""
    kwargs = kwargs or {}
    seen = []
    for arg in args:
        backend = backend_of(arg)
        if backend is not None:
            if backend.handles(func):
                return backend.call(func, tuple(args), dict(kwargs))
            if backend.name not in seen:
                seen.append(backend.name)
    if seen:
        raise DispatchError(f"function {func.value!r} is not implemented by backend(s): {', '.join(seen)}")
    return REFERENCE_IMPLS[func](*args, **kwargs)


# -- front-door functions -----------------------------------------------------


def add(a, b):
    return dispatch_call(FuncId.ADD, (a, b))


def sub(a, b):
    return dispatch_call(FuncId.SUB, (a, b))


def mul(a, b):
    return dispatch_call(FuncId.MUL, (a, b))


def div(a, b):
    return dispatch_call(FuncId.DIV, (a, b))


def arctan2(x, y):
    """Quadrant-aware arc tangent of ``y / x`` (first operand is the denominator)."""
    return dispatch_call(FuncId.ARCTAN2, (x, y))


def maximum(a, b):
    return dispatch_call(FuncId.MAXIMUM, (a, b))


def sin(a):
    return dispatch_call(FuncId.SIN, (a,))


def log(a):
    return dispatch_call(FuncId.LOG, (a,))


def exp(a):
    return dispatch_call(FuncId.EXP, (a,))


def neg(a):
    return dispatch_call(FuncId.NEG, (a,))


def sum(a, axes=None, keepdims=False):  # noqa: A001 - deliberate front-door name
    return dispatch_call(FuncId.SUM, (a,), {"axes": axes, "keepdims": keepdims})


def mean(a, axes=None, keepdims=False):
    return dispatch_call(FuncId.MEAN, (a,), {"axes": axes, "keepdims": keepdims})


def matmul(a, b):
    return dispatch_call(FuncId.MATMUL, (a, b))


def reshape(a, shape):
    return dispatch_call(FuncId.RESHAPE, (a,), {"shape": shape})


def transpose(a, perm=None):
    return dispatch_call(FuncId.TRANSPOSE, (a,), {"perm": perm})
