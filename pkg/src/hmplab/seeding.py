"""Deterministic seed derivation.

All randomness in the package flows from explicit integer seeds. Child seeds
are split off a root seed with blake2b over the root and a label path, so any
two distinct label paths give independent, reproducible streams.
"""
from __future__ import annotations

import hashlib
import random
from typing import Union

RngLike = Union[int, random.Random]


def derive_seed(root: int, *labels: object) -> int:
    """Derive a 64-bit child seed from a root seed and a label path."""
    text = str(int(root)) + "/" + "/".join(str(l) for l in labels)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def as_rng(rng: RngLike) -> random.Random:
    """Accept either an integer seed or a Random instance."""
    if isinstance(rng, random.Random):
        return rng
    return random.Random(int(rng))
