"""Seed derivation and generator construction.

Every random stream in the package is a PCG64 bit generator (numpy's
``PCG64``) seeded from a 64-bit child seed.  Child seeds come from the master
seed and a tuple of purpose labels through BLAKE2b, so adding a new purpose
(a new experiment, a new model) never perturbs existing streams.  Normal
variates are drawn with numpy's Ziggurat sampler (``Generator.standard_normal``).
"""
from __future__ import annotations

import hashlib

import numpy as np

PRNG_ALGORITHM = "PCG64"
NORMAL_METHOD = "ziggurat"

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *labels) -> int:
    """Child seed for ``labels`` under ``seed``; stable across platforms."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed) & _MASK64).encode())
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode())
    return int.from_bytes(h.digest(), "little")


def make_generator(seed: int, *labels) -> np.random.Generator:
    if labels:
        seed = derive_seed(seed, *labels)
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))
