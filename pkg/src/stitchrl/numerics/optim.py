"""Adaptive-moment gradient descent over a ParameterSet."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeError, TrainingDivergenceError
from .net import ParameterSet
from .tensor import Array


@dataclass
class AdamState:
    """First/second moment accumulators with bias correction."""

    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict[str, Array] = field(default_factory=dict)
    v: dict[str, Array] = field(default_factory=dict)


def adam_init(params: ParameterSet, lr: float = 1e-4) -> AdamState:
    state = AdamState(lr=lr)
    for name, t in params.items():
        state.m[name] = np.zeros_like(t.data)
        state.v[name] = np.zeros_like(t.data)
    return state


def adam_step(opt: AdamState, params: ParameterSet, grads: dict[str, Array]) -> ParameterSet:
    """One update in place; returns the same ParameterSet.

    A non-finite gradient aborts with the offending parameter named, before
    any entry has been touched.
    """
    for name, _ in params.items():
        g = grads[name]
        if g.shape != opt.m[name].shape:
            raise ShapeError(f"gradient for {name} has shape {g.shape}, want {opt.m[name].shape}")
        if not np.all(np.isfinite(g)):
            raise TrainingDivergenceError(f"non-finite gradient for parameter {name}")
    opt.step += 1
    c1 = 1.0 - opt.beta1**opt.step
    c2 = 1.0 - opt.beta2**opt.step
    for name, t in params.items():
        g = grads[name]
        m = opt.m[name]
        v = opt.v[name]
        m *= opt.beta1
        m += (1.0 - opt.beta1) * g
        v *= opt.beta2
        v += (1.0 - opt.beta2) * g * g
        t.data -= opt.lr * (m / c1) / (np.sqrt(v / c2) + opt.eps)
    return params
