"""Seeded random streams.

All sampling goes through numpy's Philox counter-based bit generator keyed by
a :class:`numpy.random.SeedSequence`.  Philox output is fixed by its published
algorithm, so golden files remain stable across platforms and numpy releases
that keep the ``Generator`` distribution methods unchanged.
"""

from __future__ import annotations

import numpy as np

RNG_NAME = "numpy.Philox"


def make_rng(seed, *spawn_key: int) -> np.random.Generator:
    """Return a Philox generator for ``seed`` and an optional spawn path."""
    if isinstance(seed, np.random.Generator):
        return seed
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return np.random.Generator(np.random.Philox(ss))


def child_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    """Independent child sequences, one per replica."""
    return np.random.SeedSequence(int(seed)).spawn(n)


def rng_from_seq(seq: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seq))
