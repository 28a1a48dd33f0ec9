"""Stable hashing for association histories and random sub-seeds."""

import hashlib
import struct
from collections.abc import Iterable

EMPTY_HISTORY = 0

_MASK = (1 << 64) - 1


def _digest(*parts: object) -> int:
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode())
        h.update(b"\x1f")
    return struct.unpack("<Q", h.digest())[0] & _MASK


def extend_history(parent: int, association: Iterable[tuple[object, int]]) -> int:
    """Return the history id of a child lineage.

    Args:
        parent: History id of the prior component
        association: (label, assignment) pairs chosen at this scan

    Returns:
        A new 64-bit history id, never equal to EMPTY_HISTORY
    """
    child = _digest("extend", parent, tuple(association))
    return child or 1


def combine_histories(a: int, b: int) -> int:
    """Combine two history ids, commutatively, with EMPTY_HISTORY as identity."""
    if a == EMPTY_HISTORY:
        return b
    if b == EMPTY_HISTORY:
        return a
    lo, hi = sorted((a, b))
    return _digest("combine", lo, hi) or 1


def derive_seed(seed: int, *parts: object) -> int:
    """Derive a 64-bit sub-seed from a root seed and a path of names/indices.

    Example:
        derive_seed(7, "group-update", 12, 3) gives the stream for scan 12, group 3.
    """
    return _digest("seed", seed, *parts)
