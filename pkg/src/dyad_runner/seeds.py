"""Deterministic seed derivation for independent random streams.

Every random draw in the simulator comes from a stream seeded through
``derive_seed``, so a single 64-bit master seed reproduces an entire
session (plans, balloon phases, noise windows, agent jitter) regardless
of evaluation order.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(root: int, *path: int | str) -> int:
    """Derive a 64-bit sub-seed from a root seed and a label path."""
    h = hashlib.sha256()
    h.update(str(int(root)).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(root: int, *path: int | str) -> random.Random:
    """A fresh deterministic generator for the given stream label."""
    return random.Random(derive_seed(root, *path))
