"""Versioned checkpoint documents for parameter sets.

Payloads are little-endian float32, base64-encoded, so a round trip
reproduces values to float32 precision. The header records the format
version and the seed the run was created with.
"""

from __future__ import annotations

import base64
import json
from pathlib import Path

import numpy as np

from ..errors import DataFormatError, VersionError
from .net import ParameterSet
from .tensor import Tensor

FORMAT_VERSION = 1


def params_to_doc(params: ParameterSet) -> list[dict]:
    doc = []
    for name, t in params.items():
        payload = t.data.astype("<f4").tobytes()
        doc.append(
            {
                "name": name,
                "shape": list(t.data.shape),
                "data": base64.b64encode(payload).decode("ascii"),
            }
        )
    return doc


def params_from_doc(doc: list[dict]) -> ParameterSet:
    entries: dict[str, Tensor] = {}
    for rec in doc:
        name = rec["name"]
        if name in entries:
            raise DataFormatError(f"duplicate parameter name {name!r} in checkpoint")
        raw = base64.b64decode(rec["data"])
        arr = np.frombuffer(raw, dtype="<f4").astype(np.float64)
        entries[name] = Tensor(arr.reshape(rec["shape"]))
    return ParameterSet(entries)


def save_checkpoint(
    path: str | Path, sections: dict[str, ParameterSet], header: dict
) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "header": header,
        "sections": {name: params_to_doc(ps) for name, ps in sections.items()},
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def load_checkpoint(path: str | Path) -> tuple[dict, dict[str, ParameterSet]]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise DataFormatError(f"checkpoint is not valid JSON: {err}") from err
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionError(f"checkpoint format {version!r}, supported {FORMAT_VERSION}")
    sections = {name: params_from_doc(d) for name, d in doc["sections"].items()}
    return doc["header"], sections
