"""Deterministic per-stage seed derivation."""

import hashlib

_SEED_MASK = (1 << 63) - 1


def derive_seed(seed: int, *names: str) -> int:
    """
    Derive a stage seed from the global seed.

    The stage names are joined with ``:`` and hashed with SHA-256; the first
    eight bytes of the digest are XORed into the seed. Python's ``hash()`` is
    salted per process, so it is never used here.

    Args:
        seed: Global pipeline seed
        *names: Stage name parts (e.g. "ransac", image_a, image_b)

    Returns:
        Non-negative 63-bit seed
    """
    digest = hashlib.sha256(":".join(names).encode("utf-8")).digest()
    return (int(seed) ^ int.from_bytes(digest[:8], "big")) & _SEED_MASK
