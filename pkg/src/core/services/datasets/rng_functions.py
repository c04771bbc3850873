"""Seeded random streams keyed by (seed, purpose tags)."""

import hashlib
from typing import Union

import numpy as np

Tag = Union[str, int]

_MASK64 = (1 << 64) - 1


def tag_key(tag: Tag) -> int:
    """
    64-bit key of a purpose tag.

    Integer tags (partition or round indices) are used directly; string tags are
    hashed with an 8-byte BLAKE2b digest.
    """
    if isinstance(tag, (int, np.integer)):
        return int(tag) & _MASK64
    digest = hashlib.blake2b(str(tag).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed_sequence(seed: int, *tags: Tag) -> np.random.SeedSequence:
    """SeedSequence over the run seed followed by the tag keys."""
    return np.random.SeedSequence([int(seed) & _MASK64, *[tag_key(tag) for tag in tags]])


def derive_rng(seed: int, *tags: Tag) -> np.random.Generator:
    """
    Independent PCG64 generator for a (seed, tags) pair.

    Identical arguments give identical streams; distinct tag tuples give
    statistically independent streams.
    """
    return np.random.Generator(np.random.PCG64(derive_seed_sequence(seed, *tags)))


def derive_seed(seed: int, *tags: Tag) -> int:
    """Child integer seed for a (seed, tags) pair."""
    return int(derive_seed_sequence(seed, *tags).generate_state(1, dtype=np.uint64)[0])
