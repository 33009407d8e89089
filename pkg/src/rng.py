"""Seedable, splittable random streams.

Every stochastic operation takes an explicit seed. Child streams are derived
with ``SeedSequence.spawn`` so that block ``i`` of a batch run always sees the
same numbers regardless of how many workers execute the batch.
"""

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

SeedLike = int | SeedSequence


def seed_sequence(seed: SeedLike) -> SeedSequence:
    return seed if isinstance(seed, SeedSequence) else SeedSequence(int(seed))


def make_rng(seed: SeedLike) -> Generator:
    """Return a PCG64 generator for ``seed``."""
    return Generator(PCG64(seed_sequence(seed)))


def spawn_seeds(seed: SeedLike, count: int) -> list[SeedSequence]:
    """Split ``seed`` into ``count`` independent child sequences."""
    return seed_sequence(seed).spawn(count)


def describe_seed(seq: SeedSequence) -> dict:
    """JSON-friendly description of a (possibly spawned) seed sequence."""
    entropy = seq.entropy
    if isinstance(entropy, np.ndarray | list | tuple):
        entropy = [int(e) for e in entropy]
    else:
        entropy = int(entropy)
    return {"entropy": entropy, "spawn_key": [int(k) for k in seq.spawn_key]}
