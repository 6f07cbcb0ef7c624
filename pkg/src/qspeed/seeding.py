"""Counter-based random number generators.

Every stochastic routine in the package draws from a Philox generator
keyed by a master seed plus an optional index path, so that trial i of a
Monte Carlo run produces the same bits whether trials execute serially,
in any order, or in parallel.
"""

from __future__ import annotations

import numpy as np


def generator(seed: int, *path: int) -> np.random.Generator:
    """Return a Philox Generator keyed by (seed, *path).

    Distinct key tuples give statistically independent streams; equal
    tuples give bit-identical streams.  The 128-bit Philox key is derived
    deterministically from the seed with the path as spawn key.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(seed=ss))
