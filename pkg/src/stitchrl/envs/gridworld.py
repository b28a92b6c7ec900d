"""Deterministic gridworld with an exact dynamic-programming oracle.

The agent walks cell to cell toward a terminal goal cell; walls and the
boundary block movement (the agent stays put). Continuous policy outputs
are decoded to the nearest of the four unit moves, which keeps the same
learner stack usable on both backends.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, EpisodeCompleteError, UnsupportedBackendError
from .config import Action, EnvConfig, EnvState

OBS_DIM = 2
ACTION_DIM = 2

# canonical move order: +x, -x, +y, -y
MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1))


def goal_cell(cfg: EnvConfig) -> tuple[int, int]:
    return (int(round(cfg.goal[0])), int(round(cfg.goal[1])))


def _cells_in_region(cfg: EnvConfig, region: str) -> list[tuple[int, int]]:
    box = cfg.region(region)
    walls = set(cfg.walls)
    cells = [
        (x, y)
        for x in range(cfg.grid_size)
        for y in range(cfg.grid_size)
        if box.contains((x, y)) and (x, y) not in walls
    ]
    if not cells:
        raise ConfigError(f"region {region!r} contains no free cells")
    return cells


def reset(cfg: EnvConfig, region: str, rng: np.random.Generator) -> EnvState:
    cells = _cells_in_region(cfg, region)
    cell = cells[int(rng.integers(len(cells)))]
    pos = (float(cell[0]), float(cell[1]))
    return EnvState(agent=pos, obj=pos, attached=False, t=0)


def cell_of(state: EnvState) -> tuple[int, int]:
    return (int(round(state.agent[0])), int(round(state.agent[1])))


def is_success(state: EnvState, cfg: EnvConfig) -> bool:
    return cell_of(state) == goal_cell(cfg)


def goal_distance(state: EnvState, cfg: EnvConfig) -> float:
    g = goal_cell(cfg)
    c = cell_of(state)
    return float(abs(c[0] - g[0]) + abs(c[1] - g[1]))


def is_done(state: EnvState, cfg: EnvConfig) -> bool:
    return state.t >= cfg.horizon or is_success(state, cfg)


def next_cell(cell: tuple[int, int], move: tuple[int, int], cfg: EnvConfig) -> tuple[int, int]:
    n = cfg.grid_size
    cand = (cell[0] + move[0], cell[1] + move[1])
    if not (0 <= cand[0] < n and 0 <= cand[1] < n) or cand in set(cfg.walls):
        return cell
    return cand


def decode_move(vec: np.ndarray) -> int:
    """Index of the unit move nearest the continuous action vector."""
    dots = [vec[0] * m[0] + vec[1] * m[1] for m in MOVES]
    return int(np.argmax(dots))


def step(state: EnvState, action: Action, cfg: EnvConfig) -> tuple[EnvState, bool, bool]:
    if is_done(state, cfg):
        raise EpisodeCompleteError("step() called on a finished episode")
    move = MOVES[decode_move(np.array(action.delta))]
    cell = next_cell(cell_of(state), move, cfg)
    pos = (float(cell[0]), float(cell[1]))
    nxt = EnvState(agent=pos, obj=pos, attached=False, t=state.t + 1)
    success = is_success(nxt, cfg)
    done = success or nxt.t >= cfg.horizon
    return nxt, done, success


def observe(state: EnvState, cfg: EnvConfig) -> np.ndarray:
    scale = max(cfg.grid_size - 1, 1)
    return np.array(
        [2.0 * state.agent[0] / scale - 1.0, 2.0 * state.agent[1] / scale - 1.0]
    )


def state_from_obs(obs: np.ndarray, cfg: EnvConfig, t: int = 0) -> EnvState:
    scale = max(cfg.grid_size - 1, 1)
    x = round((obs[0] + 1.0) * scale / 2.0)
    y = round((obs[1] + 1.0) * scale / 2.0)
    pos = (float(x), float(y))
    return EnvState(agent=pos, obj=pos, attached=False, t=t)


def action_bounds(cfg: EnvConfig) -> tuple[np.ndarray, np.ndarray]:
    return np.array([-1.0, -1.0]), np.array([1.0, 1.0])


def decode_action(vec: np.ndarray, cfg: EnvConfig) -> Action:
    move = MOVES[decode_move(vec)]
    return Action(delta=(float(move[0]), float(move[1])), attach_toggle=False)


def encode_move(move_idx: int) -> np.ndarray:
    return np.array(MOVES[move_idx], dtype=np.float64)


def value_iteration(
    cfg: EnvConfig,
    gamma: float,
    reward_map: np.ndarray,
    tol: float = 1e-10,
    max_sweeps: int = 1_000_000,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact optimal values for the deterministic grid MDP.

    reward_map has shape (n, n, 4) indexed by (x, y, move). The goal cell
    is absorbing with value 0 (episodes end there). Returns (values,
    greedy mask, q), where the mask marks every action within 1e-9 of the
    per-state maximum.
    """
    if cfg.env_id != "gridworld":
        raise UnsupportedBackendError("value iteration requires the gridworld backend")
    if not (0.0 < gamma < 1.0):
        raise ConfigError("gamma must lie in (0, 1)")
    n = cfg.grid_size
    reward_map = np.asarray(reward_map, dtype=np.float64)
    if reward_map.shape != (n, n, len(MOVES)):
        raise ConfigError(f"reward_map must have shape {(n, n, len(MOVES))}")
    goal = goal_cell(cfg)
    walls = set(cfg.walls)

    nxt_x = np.zeros((n, n, len(MOVES)), dtype=np.int64)
    nxt_y = np.zeros((n, n, len(MOVES)), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            for a, move in enumerate(MOVES):
                tx, ty = next_cell((x, y), move, cfg) if (x, y) not in walls else (x, y)
                nxt_x[x, y, a] = tx
                nxt_y[x, y, a] = ty

    into_goal = (nxt_x == goal[0]) & (nxt_y == goal[1])
    values = np.zeros((n, n))
    for _ in range(max_sweeps):
        cont = values[nxt_x, nxt_y]
        cont[into_goal] = 0.0
        q = reward_map + gamma * cont
        new = q.max(axis=2)
        new[goal] = 0.0
        for w in walls:
            new[w] = 0.0
        residual = np.abs(new - values).max()
        values = new
        if residual < tol:
            break
    cont = values[nxt_x, nxt_y]
    cont[into_goal] = 0.0
    q = reward_map + gamma * cont
    greedy = q >= q.max(axis=2, keepdims=True) - 1e-9
    return values, greedy, q
