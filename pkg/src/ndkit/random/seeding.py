"""Entropy pooling and deterministic spawning of seed material.

A :class:`SeedSequence` folds user entropy (or system entropy) and a spawn
key into a 64-bit pool, then expands the pool into any number of high-quality
seed words.  Children created by :meth:`SeedSequence.spawn` extend the spawn
key with fresh indices, so parallel workers get distinct, reproducible
streams from one root seed.
"""

from __future__ import annotations

import secrets

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_POOL_INIT = 0x5555555555555555


def mix64(z: int) -> int:
    """64-bit avalanche finalizer (xor-shift / multiply)."""
    z &= _MASK64
    z ^= z >> 33
    z = (z * 0xFF51AFD7ED558CCD) & _MASK64
    z ^= z >> 33
    z = (z * 0xC4CEB9FE1A85EC53) & _MASK64
    z ^= z >> 33
    return z


def _entropy_words(entropy) -> tuple:
    if entropy is None:
        return tuple(secrets.randbits(64) for _ in range(4))
    if isinstance(entropy, bool):
        raise TypeError("entropy must be an int or a sequence of 64-bit words")
    if isinstance(entropy, int):
        if entropy < 0:
            raise ValueError("entropy must be non-negative")
        words = []
        while True:
            words.append(entropy & _MASK64)
            entropy >>= 64
            if not entropy:
                return tuple(words)
    words = tuple(entropy)
    for w in words:
        if not isinstance(w, int) or isinstance(w, bool) or not 0 <= w <= _MASK64:
            raise ValueError(f"entropy word {w!r} is not an unsigned 64-bit int")
    return words


class SeedSequence:
    """Deterministic pool over (entropy, spawn_key) with spawnable children."""

    def __init__(self, entropy=None, *, spawn_key=()):
        self.entropy = _entropy_words(entropy)
        spawn_key = tuple(spawn_key)
        for w in spawn_key:
            if not isinstance(w, int) or isinstance(w, bool) or not 0 <= w < (1 << 32):
                raise ValueError(f"spawn key word {w!r} is not an unsigned 32-bit int")
        self.spawn_key = spawn_key
        self.children_spawned = 0
        pool = _POOL_INIT
        for i, w in enumerate(self.entropy + self.spawn_key):
            pool = mix64(pool ^ ((w + _GOLDEN * (i + 1)) & _MASK64))
        self.pool = pool

    def generate_state(self, n: int) -> list:
        """``n`` seed words; a pure function of the pool, so prefixes agree."""
        if n < 1:
            raise ValueError("need at least one word")
        return [mix64((self.pool + _GOLDEN * (j + 1)) & _MASK64) for j in range(n)]

    def spawn(self, n: int) -> list:
        """``n`` children with fresh spawn-key indices; never reuses an index."""
        if n < 1:
            raise ValueError("need at least one child")
        start = self.children_spawned
        children = [
            SeedSequence(self.entropy, spawn_key=self.spawn_key + (start + i,))
            for i in range(n)
        ]
        self.children_spawned = start + n
        return children

    def __repr__(self):
        return f"SeedSequence(entropy={list(self.entropy)!r}, spawn_key={list(self.spawn_key)!r})"
