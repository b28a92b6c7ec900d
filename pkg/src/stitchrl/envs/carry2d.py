"""Continuous 2D attach-and-carry task.

The agent starts at a fixed home pose, the object somewhere in the chosen
reset region. Toggling within the grab radius attaches or releases the
object; while attached the object follows the agent rigidly. An episode
succeeds once the object rests within the goal tolerance unattached.
"""

from __future__ import annotations

import numpy as np

from ..errors import EpisodeCompleteError
from .config import Action, Box, EnvConfig, EnvState

WORKSPACE = Box((-1.0, -1.0), (1.0, 1.0))
HOME = (0.0, 0.0)

OBS_DIM = 5
ACTION_DIM = 3  # dx, dy, toggle channel


def grab_radius(cfg: EnvConfig) -> float:
    # 2x step_scale keeps the scripted expert's toggles reliable
    return 2.0 * cfg.step_scale


def reset(cfg: EnvConfig, region: str, rng: np.random.Generator) -> EnvState:
    obj = cfg.region(region).sample(rng)
    return EnvState(agent=HOME, obj=obj, attached=False, t=0)


def is_success(state: EnvState, cfg: EnvConfig) -> bool:
    return (not state.attached) and goal_distance(state, cfg) < cfg.goal_tol


def goal_distance(state: EnvState, cfg: EnvConfig) -> float:
    return float(np.hypot(state.obj[0] - cfg.goal[0], state.obj[1] - cfg.goal[1]))


def is_done(state: EnvState, cfg: EnvConfig) -> bool:
    return state.t >= cfg.horizon or is_success(state, cfg)


def _clip_workspace(p: tuple[float, float]) -> tuple[float, float]:
    return (
        min(max(p[0], WORKSPACE.lo[0]), WORKSPACE.hi[0]),
        min(max(p[1], WORKSPACE.lo[1]), WORKSPACE.hi[1]),
    )


def step(state: EnvState, action: Action, cfg: EnvConfig) -> tuple[EnvState, bool, bool]:
    """Advance one step; returns (next_state, done, success)."""
    if is_done(state, cfg):
        raise EpisodeCompleteError("step() called on a finished episode")
    s = cfg.step_scale
    dx = min(max(action.delta[0], -s), s)
    dy = min(max(action.delta[1], -s), s)
    agent = _clip_workspace((state.agent[0] + dx, state.agent[1] + dy))
    moved = (agent[0] - state.agent[0], agent[1] - state.agent[1])
    attached = state.attached
    obj = state.obj
    if action.attach_toggle:
        near = np.hypot(agent[0] - obj[0], agent[1] - obj[1]) <= grab_radius(cfg)
        if near:
            attached = not attached
    if attached:
        obj = _clip_workspace((obj[0] + moved[0], obj[1] + moved[1]))
    nxt = EnvState(agent=agent, obj=obj, attached=attached, t=state.t + 1)
    success = is_success(nxt, cfg)
    done = success or nxt.t >= cfg.horizon
    return nxt, done, success


def observe(state: EnvState) -> np.ndarray:
    """Flat 5-vector in [-1, 1]: agent xy, object xy, attached flag."""
    return np.array(
        [state.agent[0], state.agent[1], state.obj[0], state.obj[1], float(state.attached)]
    )


def state_from_obs(obs: np.ndarray, t: int = 0) -> EnvState:
    return EnvState(
        agent=(float(obs[0]), float(obs[1])),
        obj=(float(obs[2]), float(obs[3])),
        attached=bool(obs[4] > 0.5),
        t=t,
    )


def action_bounds(cfg: EnvConfig) -> tuple[np.ndarray, np.ndarray]:
    s = cfg.step_scale
    return np.array([-s, -s, 0.0]), np.array([s, s, 1.0])


def decode_action(vec: np.ndarray, cfg: EnvConfig) -> Action:
    s = cfg.step_scale
    return Action(
        delta=(float(np.clip(vec[0], -s, s)), float(np.clip(vec[1], -s, s))),
        attach_toggle=bool(vec[2] > 0.5),
    )


def encode_action(action: Action) -> np.ndarray:
    return np.array([action.delta[0], action.delta[1], 1.0 if action.attach_toggle else 0.0])
