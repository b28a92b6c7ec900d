"""Named, stable sub-streams derived from one root seed.

Component seeds must not shift when unrelated parts of a run config change,
so each stream is keyed by (root_seed, name) through SHA-256 rather than by
draw order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def child_seed(root: int, name: str) -> int:
    digest = hashlib.sha256(f"{root}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def stream(root: int, name: str) -> np.random.Generator:
    """Generator for the sub-stream `name` of root seed `root`."""
    return np.random.default_rng(child_seed(root, name))
