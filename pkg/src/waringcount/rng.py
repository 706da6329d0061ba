"""Deterministic counter-mode random generator.

Randomized constructions here must reproduce exactly across runs and
platforms, so random draws come from SHA-256 of (seed material, counter)
rather than from a stateful platform generator.  Independent streams are
obtained by extending the seed material with task labels, which is what
makes parallel and serial schedules agree.
"""

from __future__ import annotations

import hashlib


class CounterRng:
    """Uniform integers from a keyed counter stream.

    The key is derived from the positional seed parts (ints and strings,
    typically ``(seed, task_label, task_index)``); two streams with equal
    parts produce identical output.
    """

    def __init__(self, *seed_parts: object):
        material = "\x1f".join(repr(p) for p in seed_parts)
        self._key = hashlib.sha256(material.encode("utf-8")).digest()
        self._counter = 0
        self._words: list[int] = []

    def _next_word(self) -> int:
        if not self._words:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            self._words = [
                int.from_bytes(block[i : i + 8], "big") for i in range(0, 32, 8)
            ]
        return self._words.pop()

    def randrange(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self._next_word()
            if value < limit:
                return value % bound

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def function(self, n: int, out: int) -> tuple[int, ...]:
        """A uniformly random function [n] -> [out] as a value tuple."""
        return tuple(self.randrange(out) for _ in range(n))

    def subset(self, n: int, k: int) -> tuple[int, ...]:
        """A uniformly random k-subset of range(n), sorted."""
        chosen: set[int] = set()
        while len(chosen) < k:
            chosen.add(self.randrange(n))
        return tuple(sorted(chosen))
