"""Checkpoint round-trips at float32 precision."""

import json

import numpy as np
import pytest

from stitchrl.errors import VersionError
from stitchrl.numerics import (
    init_mlp,
    load_checkpoint,
    params_from_doc,
    params_to_doc,
    save_checkpoint,
)


def test_round_trip_preserves_values_to_float32(tmp_path):
    rng = np.random.default_rng(9)
    params = init_mlp([3, 7, 2], rng)
    path = tmp_path / "ckpt.json"
    save_checkpoint(path, {"net": params}, {"seed": 9})
    header, sections = load_checkpoint(path)
    assert header["seed"] == 9
    for name, t in params.items():
        got = sections["net"][name].data
        np.testing.assert_array_equal(got, t.data.astype(np.float32).astype(np.float64))
        assert np.max(np.abs(got - t.data)) < 1e-6


def test_second_round_trip_is_exact(tmp_path):
    # once quantized to f32, a further save/load is lossless
    params = init_mlp([2, 4, 1], np.random.default_rng(1))
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    save_checkpoint(p1, {"net": params}, {"seed": 1})
    _, s1 = load_checkpoint(p1)
    save_checkpoint(p2, {"net": s1["net"]}, {"seed": 1})
    assert p1.read_bytes() == p2.read_bytes()


def test_version_mismatch_rejected(tmp_path):
    path = tmp_path / "old.json"
    doc = {"format_version": 99, "header": {}, "sections": {}}
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionError):
        load_checkpoint(path)


def test_doc_round_trip_without_files():
    params = init_mlp([5, 3], np.random.default_rng(2))
    doc = params_to_doc(params)
    back = params_from_doc(doc)
    assert back.names() == params.names()
    for name, t in params.items():
        assert back[name].data.shape == t.data.shape
