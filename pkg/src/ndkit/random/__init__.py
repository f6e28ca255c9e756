"""Component-based random generation.

Three separable pieces: a :class:`SeedSequence` pools entropy and spawns
deterministic children; a bit generator (:class:`PCG64` default,
:class:`MT19937` alternative) turns seed words into a raw uniform 64-bit
stream; a :class:`VariateGenerator` transforms that stream into uniforms,
bounded integers, and normal/exponential variates.
"""

from .bitgen import MT19937, PCG64, BitGenerator, ScriptedBitGenerator
from .generator import VariateGenerator
from .seeding import SeedSequence
from .ziggurat import LAYERS, ZigguratTables, build_ziggurat

__all__ = [
    "BitGenerator",
    "MT19937",
    "PCG64",
    "ScriptedBitGenerator",
    "SeedSequence",
    "VariateGenerator",
    "ZigguratTables",
    "LAYERS",
    "build_ziggurat",
    "default_generator",
]


def default_generator(seed=None) -> VariateGenerator:
    """A PCG64-backed generator; omit the seed for system entropy."""
    return VariateGenerator(PCG64(seed))
