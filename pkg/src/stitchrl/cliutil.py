"""Canonical hashing and JSON helpers shared by artifacts and the CLI."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def config_hash(doc) -> str:
    """Stable 12-hex-digit digest of a JSON-serializable config."""
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()[:12]


def file_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:12]
