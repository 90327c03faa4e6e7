"""Seeded, splittable random streams.

Every stochastic routine derives its generators from one 64-bit seed:
stream ``k`` is ``Philox(SeedSequence(seed, spawn_key=(k,)))``. Streams are
named so that, for example, the subordinator draws R of a ggBm ensemble and
of the matching OU ensemble coincide when they share a seed.
"""

import numpy as np

from .errors import DomainError

STREAM_R = 0
STREAM_GAUSS = 1
STREAM_AUX = 2

SCHEME = "philox4x64/seedsequence(seed, spawn_key=(stream,)); stream 0 = R, 1 = gaussians, 2 = auxiliary"


def check_seed(seed):
    if seed is None:
        raise DomainError("a seed is required for stochastic computations")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError("seed must fit in an unsigned 64-bit integer")
    return seed


def stream(seed, index):
    """Generator for stream ``index`` of ``seed``."""
    seed = check_seed(seed)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(int(index),))))
