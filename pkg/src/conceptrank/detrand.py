"""Deterministic randomness helpers.

Everything downstream that samples (ratio estimation, evaluation sampling)
goes through these functions so that a fixed seed gives bit-identical output
on every platform and Python version. We deliberately avoid
``random.sample``/``numpy.random.choice``, whose internals are not pinned.
"""

from __future__ import annotations

import hashlib
import random

_MASK64 = (1 << 64) - 1


def stable_hash64(text: str) -> int:
    """64-bit hash of a string, stable across processes and platforms."""
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def mix_seed(seed: int, text: str) -> int:
    """Per-term seed: global seed XORed with a stable hash of the term."""
    return (seed ^ stable_hash64(text)) & _MASK64


def randbelow(rng: random.Random, n: int) -> int:
    """Uniform integer in [0, n) using only getrandbits (rejection sampling)."""
    if n <= 0:
        raise ValueError("randbelow needs n >= 1")
    k = n.bit_length()
    r = rng.getrandbits(k)
    while r >= n:
        r = rng.getrandbits(k)
    return r


def sample_without_replacement(rng: random.Random, population: int, k: int) -> list[int]:
    """k distinct indices drawn uniformly from range(population).

    Partial Fisher-Yates over a sparse index map; O(k) memory. Order of the
    returned indices is the draw order, not sorted.
    """
    if k < 0 or k > population:
        raise ValueError(f"cannot sample {k} from population of {population}")
    swapped: dict[int, int] = {}
    out = []
    for i in range(k):
        j = i + randbelow(rng, population - i)
        vi = swapped.get(i, i)
        vj = swapped.get(j, j)
        swapped[i], swapped[j] = vj, vi
        out.append(vj)
    return out
