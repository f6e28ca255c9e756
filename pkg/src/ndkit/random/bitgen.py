"""Bit generators: deterministic state machines emitting uniform 64-bit words.

The interface is ``next_u64`` (primary), ``next_u32`` (the low half of a full
64-bit draw), and ``next_double`` (53-bit uniform grid on [0, 1)).  Raw
bit-generator output is version-stable; distribution-level streams built on
top of it are not promised across releases.
"""

from __future__ import annotations

from .._kernels import kernels as _K
from .seeding import SeedSequence

_MASK32 = (1 << 32) - 1
_MASK64 = (1 << 64) - 1


def _as_seedseq(seed) -> SeedSequence:
    if seed is None:
        return SeedSequence()
    if isinstance(seed, SeedSequence):
        return seed
    return SeedSequence(seed)


class BitGenerator:
    """Raw uniform 64-bit word source; single-owner, not thread-shared."""

    def next_u64(self) -> int:
        raise NotImplementedError

    def next_u32(self) -> int:
        return self.next_u64() & _MASK32

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


class PCG64(BitGenerator):
    """128-bit permuted congruential generator, XSL-RR output function.

    Seeding consumes four seed words: the first two form the state (high word
    first), the last two the increment, forced odd.  The output is computed
    from the post-advance state.
    """

    def __init__(self, seed=None):
        self.seed_sequence = _as_seedseq(seed)
        w = self.seed_sequence.generate_state(4)
        inc = (((w[2] << 64) | w[3]) << 1 | 1) & ((1 << 128) - 1)
        self._core = _K.Pcg64Core(w[0], w[1], inc >> 64, inc & _MASK64)

    def next_u64(self) -> int:
        return self._core.next_u64()

    @property
    def state(self) -> dict:
        hi, lo, ihi, ilo = self._core.get_state()
        return {"state": (hi << 64) | lo, "increment": (ihi << 64) | ilo}

    @state.setter
    def state(self, value: dict):
        s, inc = value["state"], value["increment"]
        self._core.set_state(s >> 64, s & _MASK64, inc >> 64, inc & _MASK64)


class MT19937(BitGenerator):
    """32-bit Mersenne twister; 64-bit words join two draws, high word first."""

    def __init__(self, seed=None, *, classic_seed=None):
        if classic_seed is not None:
            if seed is not None:
                raise TypeError("pass either a seed sequence or classic_seed, not both")
            self.seed_sequence = None
            key = self._classic_key(classic_seed)
        else:
            self.seed_sequence = _as_seedseq(seed)
            words = self.seed_sequence.generate_state(312)
            key = []
            for w in words:
                key.append(w & _MASK32)
                key.append((w >> 32) & _MASK32)
            if not any(key):
                key[0] = 0x80000000  # degenerate-state guard
        self._core = _K.Mt19937Core(key, 624)

    @staticmethod
    def _classic_key(seed: int) -> list:
        if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed <= _MASK32:
            raise ValueError("classic_seed must be an unsigned 32-bit int")
        key = [seed] + [0] * 623
        for i in range(1, 624):
            key[i] = (1812433253 * (key[i - 1] ^ (key[i - 1] >> 30)) + i) & _MASK32
        return key

    def next_u64(self) -> int:
        return self._core.next_u64()

    def next_raw32(self) -> int:
        """One output of the underlying 32-bit twister."""
        return self._core.next_u32()

    @property
    def state(self) -> dict:
        key, pos = self._core.get_state()
        return {"key": key, "position": pos}

    @state.setter
    def state(self, value: dict):
        self._core.set_state(value["key"], value["position"])


class ScriptedBitGenerator(BitGenerator):
    """Test seam: replays a fixed list of 64-bit words."""

    def __init__(self, words, cycle: bool = False):
        self._words = [w & _MASK64 for w in words]
        self._pos = 0
        self._cycle = cycle

    def next_u64(self) -> int:
        if self._pos >= len(self._words):
            if not self._cycle:
                raise RuntimeError("scripted bit generator ran out of words")
            self._pos = 0
        w = self._words[self._pos]
        self._pos += 1
        return w

    @property
    def words_used(self) -> int:
        return self._pos
