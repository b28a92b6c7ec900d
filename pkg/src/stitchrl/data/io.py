"""Line-oriented dataset files.

One JSON object per line: a header first, then one record per trajectory.
Floats are serialized with Python's shortest round-trip repr, so a save and
load reproduces every value bit-exactly and re-running a seeded generation
reproduces the file byte-for-byte. The format is append-friendly, which the
iterative-improvement loop relies on.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DataFormatError, VersionError
from .types import Dataset, Trajectory, trajectory_from_arrays

FORMAT_VERSION = 1


def _traj_record(traj: Trajectory, side: str) -> dict:
    states = [list(t.state) for t in traj.transitions]
    states.append(list(traj.transitions[-1].next_state))
    return {
        "kind": "traj",
        "side": side,
        "source": traj.source,
        "success": traj.success,
        "env_id": traj.env_id,
        "seed": traj.seed,
        "terminal": traj.transitions[-1].terminal,
        "states": states,
        "actions": [list(t.action) for t in traj.transitions],
    }


def dumps_dataset(ds: Dataset) -> str:
    lines = [
        json.dumps(
            {"kind": "header", "version": FORMAT_VERSION, "metadata": ds.metadata},
            sort_keys=True,
            separators=(",", ":"),
        )
    ]
    for traj in ds.expert_trajs:
        lines.append(json.dumps(_traj_record(traj, "expert"), sort_keys=True, separators=(",", ":")))
    for traj in ds.nonexpert_trajs:
        lines.append(
            json.dumps(_traj_record(traj, "nonexpert"), sort_keys=True, separators=(",", ":"))
        )
    return "\n".join(lines) + "\n"


def save_dataset(ds: Dataset, path: str | Path) -> None:
    Path(path).write_text(dumps_dataset(ds))


def _parse_traj(rec: dict, line_no: int) -> tuple[str, Trajectory]:
    try:
        side = rec["side"]
        if side not in ("expert", "nonexpert"):
            raise DataFormatError(f"unknown side {side!r}", line=line_no)
        traj = trajectory_from_arrays(
            states=np.array(rec["states"], dtype=np.float64),
            actions=np.array(rec["actions"], dtype=np.float64),
            expert=(side == "expert"),
            terminal=rec["terminal"],
            success=rec["success"],
            source=rec["source"],
            env_id=rec["env_id"],
            seed=rec["seed"],
        )
    except DataFormatError:
        raise
    except Exception as err:
        raise DataFormatError(f"bad trajectory record: {err}", line=line_no) from err
    return side, traj


def loads_dataset(text: str) -> Dataset:
    lines = text.splitlines()
    if not lines:
        raise DataFormatError("empty dataset file", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as err:
        raise DataFormatError(f"header is not valid JSON: {err.msg}", line=1) from err
    if header.get("kind") != "header":
        raise DataFormatError("first line must be the header record", line=1)
    if header.get("version") != FORMAT_VERSION:
        raise VersionError(
            f"dataset format {header.get('version')!r}, supported {FORMAT_VERSION}", line=1
        )
    expert: list[Trajectory] = []
    nonexpert: list[Trajectory] = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as err:
            raise DataFormatError(f"record is not valid JSON: {err.msg}", line=i) from err
        if rec.get("kind") != "traj":
            raise DataFormatError(f"unexpected record kind {rec.get('kind')!r}", line=i)
        side, traj = _parse_traj(rec, i)
        (expert if side == "expert" else nonexpert).append(traj)
    return Dataset(expert_trajs=expert, nonexpert_trajs=nonexpert, metadata=header["metadata"])


def load_dataset(path: str | Path) -> Dataset:
    return loads_dataset(Path(path).read_text())
