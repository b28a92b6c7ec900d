"""Simulation backends: continuous attach-and-carry and a gridworld oracle.

The functions here dispatch on ``cfg.env_id`` so generators, learners, and
evaluation all run against one interface. Environments are value objects;
independent rollouts never share mutable state.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from . import carry2d, gridworld
from .config import (
    Action,
    Box,
    EnvConfig,
    EnvState,
    carry2d_config,
    gridworld_config,
)
from .gridworld import value_iteration

_BACKENDS = {"carry2d": carry2d, "gridworld": gridworld}


def _backend(cfg: EnvConfig):
    try:
        return _BACKENDS[cfg.env_id]
    except KeyError:
        raise ConfigError(f"unknown env_id {cfg.env_id!r}") from None


def reset(cfg: EnvConfig, region: str, rng: np.random.Generator) -> EnvState:
    return _backend(cfg).reset(cfg, region, rng)


def step(state: EnvState, action: Action, cfg: EnvConfig) -> tuple[EnvState, bool, bool]:
    return _backend(cfg).step(state, action, cfg)


def observe(state: EnvState, cfg: EnvConfig) -> np.ndarray:
    if cfg.env_id == "carry2d":
        return carry2d.observe(state)
    return gridworld.observe(state, cfg)


def is_done(state: EnvState, cfg: EnvConfig) -> bool:
    return _backend(cfg).is_done(state, cfg)


def is_success(state: EnvState, cfg: EnvConfig) -> bool:
    return _backend(cfg).is_success(state, cfg)


def goal_distance(state: EnvState, cfg: EnvConfig) -> float:
    return _backend(cfg).goal_distance(state, cfg)


def action_bounds(cfg: EnvConfig) -> tuple[np.ndarray, np.ndarray]:
    return _backend(cfg).action_bounds(cfg)


def decode_action(vec: np.ndarray, cfg: EnvConfig) -> Action:
    return _backend(cfg).decode_action(vec, cfg)


def obs_dim(cfg: EnvConfig) -> int:
    return _backend(cfg).OBS_DIM


def action_dim(cfg: EnvConfig) -> int:
    return _backend(cfg).ACTION_DIM


__all__ = [
    "Action",
    "Box",
    "EnvConfig",
    "EnvState",
    "action_bounds",
    "action_dim",
    "carry2d",
    "carry2d_config",
    "decode_action",
    "goal_distance",
    "gridworld",
    "gridworld_config",
    "is_done",
    "is_success",
    "obs_dim",
    "observe",
    "reset",
    "step",
    "value_iteration",
]
