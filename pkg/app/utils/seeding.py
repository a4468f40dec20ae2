"""Seed handling.

Every random draw in the package takes an explicit seed. Child seeds are derived
by hashing (master, index) so trials and traces are reproducible no matter which
worker runs them or in which order.
"""

from __future__ import annotations

import hashlib
from typing import Union

import numpy as np


Seed = Union[int, np.random.Generator]


def derive_seed(master: int, *path: int | str) -> int:
    """Return a 63-bit child seed for ``(master, *path)``.

    Path items may be ints or short labels. Uses blake2b over the text
    rendering, so the mapping is stable across platforms and Python versions.
    """
    key = ":".join(v if isinstance(v, str) else str(int(v)) for v in (master, *path)).encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


__all__ = ["Seed", "derive_seed", "make_rng"]
