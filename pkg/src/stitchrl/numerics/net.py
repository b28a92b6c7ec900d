"""Parameter containers and MLP forward passes.

A network is a ParameterSet with entries ``l{i}.W`` / ``l{i}.b`` for layer i.
Hidden layers use the configured activation, the output layer is linear.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from ..errors import ConfigError, ShapeError
from .tensor import Array, Tensor, add, matmul, relu, reshape, tanh

ACTIVATIONS = ("relu", "tanh")


class ParameterSet:
    """Named, shape-locked collection of parameter tensors.

    Names are unique by construction and the set of entries (and their
    shapes) is fixed once built; only the underlying values may change,
    via the optimizer or an explicit `load_values`.
    """

    def __init__(self, entries: dict[str, Tensor]):
        self._entries: dict[str, Tensor] = dict(entries)

    def __getitem__(self, name: str) -> Tensor:
        return self._entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def items(self) -> Iterator[tuple[str, Tensor]]:
        return iter(self._entries.items())

    def copy(self) -> "ParameterSet":
        return ParameterSet({k: Tensor(v.data.copy()) for k, v in self._entries.items()})

    def load_values(self, other: "ParameterSet") -> None:
        """Copy values in from a set with identical names and shapes."""
        for name, tensor in self._entries.items():
            src = other[name]
            if src.data.shape != tensor.data.shape:
                raise ShapeError(f"parameter {name}: shape {src.data.shape} != {tensor.data.shape}")
            tensor.data[...] = src.data

    def n_scalars(self) -> int:
        return sum(t.size for t in self._entries.values())

    def weight_names(self) -> list[str]:
        return [n for n in self._entries if n.endswith(".W")]


def init_mlp(sizes: list[int], rng: np.random.Generator) -> ParameterSet:
    """He-scaled random init for a dense net with the given layer widths."""
    if len(sizes) < 2:
        raise ConfigError("an MLP needs at least input and output widths")
    entries: dict[str, Tensor] = {}
    for i, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        w = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
        entries[f"l{i}.W"] = Tensor(w)
        entries[f"l{i}.b"] = Tensor(np.zeros(fan_out))
    return ParameterSet(entries)


def n_layers(params: ParameterSet) -> int:
    count = 0
    while f"l{count}.W" in params:
        count += 1
    if count == 0:
        raise ConfigError("parameter set holds no l{i}.W entries")
    return count


def forward_mlp(params: ParameterSet, x: Tensor | Array, activation: str = "relu") -> Tensor:
    """Differentiable forward pass; hidden activations only, linear output.

    Raises ShapeError naming the first layer whose input width does not
    match the incoming feature dimension.
    """
    if activation not in ACTIVATIONS:
        raise ConfigError(f"unknown activation {activation!r}")
    act = relu if activation == "relu" else tanh
    h = x if isinstance(x, Tensor) else Tensor(x)
    if h.data.ndim == 1:
        h = reshape(h, (1, h.data.shape[0]))
    depth = n_layers(params)
    for i in range(depth):
        w = params[f"l{i}.W"]
        if h.data.shape[-1] != w.data.shape[0]:
            raise ShapeError(
                f"layer l{i}.W expects input width {w.data.shape[0]}, got {h.data.shape[-1]}"
            )
        h = add(matmul(h, w), params[f"l{i}.b"])
        if i < depth - 1:
            h = act(h)
    return h


def forward_mlp_np(params: ParameterSet, x: Array, activation: str = "relu") -> Array:
    """Plain-numpy forward pass for rollouts and targets (no graph built)."""
    h = np.atleast_2d(np.asarray(x, dtype=np.float64))
    depth = n_layers(params)
    for i in range(depth):
        w = params[f"l{i}.W"].data
        if h.shape[-1] != w.shape[0]:
            raise ShapeError(
                f"layer l{i}.W expects input width {w.shape[0]}, got {h.shape[-1]}"
            )
        h = h @ w + params[f"l{i}.b"].data
        if i < depth - 1:
            h = np.maximum(h, 0.0) if activation == "relu" else np.tanh(h)
    return h
