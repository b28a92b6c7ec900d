"""Scripted controllers and the four data regimes they synthesize.

Controllers are deterministic functions of the environment state (plus any
per-trajectory private state, e.g. waypoints), so behavior cloning can fit
them. Expert demonstrations start from the narrow p0 region; play data
starts from the wide p_test region and never aims at the goal; suboptimal
data perturbs or truncates the expert. A controller whose script has run
out sets `exhausted`, which ends the recorded trajectory.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .. import envs
from ..cliutil import config_hash
from ..envs import Action, EnvConfig, EnvState, carry2d, gridworld
from ..errors import ConfigError, GenerationError
from .types import Dataset, Trajectory, trajectory_from_arrays

SUBOPTIMAL_MODES = ("noisy", "early_stop", "partial")

# play waypoints keep this many goal tolerances clear of the goal
PLAY_GOAL_MARGIN = 3.0

Controller = Callable[[EnvState], Action]


def _clamp_inf(dx: float, dy: float, s: float) -> tuple[float, float]:
    return (min(max(dx, -s), s), min(max(dy, -s), s))


def make_expert_controller(cfg: EnvConfig) -> Controller:
    """Go to the object, attach, carry it onto the goal, release."""
    if cfg.env_id == "gridworld":
        return _make_grid_expert(cfg)

    def act(state: EnvState) -> Action:
        s = cfg.step_scale
        if state.attached:
            gx, gy = cfg.goal[0] - state.obj[0], cfg.goal[1] - state.obj[1]
            if np.hypot(gx, gy) < 0.5 * cfg.goal_tol:
                return Action(delta=(0.0, 0.0), attach_toggle=True)
            return Action(delta=_clamp_inf(gx, gy, s))
        ox, oy = state.obj[0] - state.agent[0], state.obj[1] - state.agent[1]
        if np.hypot(ox, oy) <= 0.5 * carry2d.grab_radius(cfg):
            return Action(delta=(0.0, 0.0), attach_toggle=True)
        return Action(delta=_clamp_inf(ox, oy, s))

    return act


def _make_grid_expert(cfg: EnvConfig) -> Controller:
    """Shortest-path walk; one canonical move per cell via BFS from the goal."""
    n = cfg.grid_size
    goal = gridworld.goal_cell(cfg)
    walls = set(cfg.walls)
    dist = {goal: 0}
    frontier = [goal]
    while frontier:
        nxt_frontier = []
        for cell in frontier:
            for move in gridworld.MOVES:
                nb = (cell[0] - move[0], cell[1] - move[1])
                if 0 <= nb[0] < n and 0 <= nb[1] < n and nb not in walls and nb not in dist:
                    dist[nb] = dist[cell] + 1
                    nxt_frontier.append(nb)
        frontier = nxt_frontier

    def act(state: EnvState) -> Action:
        cell = gridworld.cell_of(state)
        if cell not in dist:
            raise GenerationError(f"no path from cell {cell} to the goal")
        for move in gridworld.MOVES:
            nb = gridworld.next_cell(cell, move, cfg)
            if nb != cell and dist.get(nb, np.inf) < dist[cell]:
                return Action(delta=(float(move[0]), float(move[1])))
        raise GenerationError(f"BFS map inconsistent at cell {cell}")

    return act


class PlayController:
    """Carry the object through a few random waypoints, detaching at each.

    Waypoints avoid the goal neighborhood, so play almost never completes
    the task; what it does leave behind is broad coverage of carry segments
    from arbitrary object poses.
    """

    def __init__(self, cfg: EnvConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.exhausted = False
        n_waypoints = int(rng.integers(2, 6))
        self.waypoints: list[tuple[float, float]] = []
        while len(self.waypoints) < n_waypoints:
            cand = cfg.p_test.sample(rng)
            clear = np.hypot(cand[0] - cfg.goal[0], cand[1] - cfg.goal[1])
            if clear >= PLAY_GOAL_MARGIN * cfg.goal_tol:
                self.waypoints.append(cand)
        self._i = 0

    def __call__(self, state: EnvState) -> Action:
        cfg = self.cfg
        s = cfg.step_scale
        if self._i >= len(self.waypoints):
            self.exhausted = True
            return Action(delta=(0.0, 0.0))
        if not state.attached:
            ox, oy = state.obj[0] - state.agent[0], state.obj[1] - state.agent[1]
            if np.hypot(ox, oy) <= 0.5 * carry2d.grab_radius(cfg):
                return Action(delta=(0.0, 0.0), attach_toggle=True)
            return Action(delta=_clamp_inf(ox, oy, s))
        wx, wy = self.waypoints[self._i][0] - state.obj[0], self.waypoints[self._i][1] - state.obj[1]
        if np.hypot(wx, wy) < 0.5 * cfg.goal_tol:
            self._i += 1
            if self._i >= len(self.waypoints):
                self.exhausted = True
            return Action(delta=(0.0, 0.0), attach_toggle=True)
        return Action(delta=_clamp_inf(wx, wy, s))


class GridRandomWalk:
    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.exhausted = False

    def __call__(self, state: EnvState) -> Action:
        move = gridworld.MOVES[int(self.rng.integers(len(gridworld.MOVES)))]
        return Action(delta=(float(move[0]), float(move[1])))


def make_play_controller(cfg: EnvConfig, rng: np.random.Generator) -> Controller:
    if cfg.env_id == "gridworld":
        return GridRandomWalk(rng)
    return PlayController(cfg, rng)


def make_noisy_controller(
    cfg: EnvConfig, rng: np.random.Generator, noise_scale: float = 0.5
) -> Controller:
    """Expert with per-step Gaussian action noise.

    Noise is drawn in normalized action units: sigma = noise_scale *
    step_scale on the movement axes and noise_scale on the grab channel,
    then re-clamped by the environment's action decoding. On the gridworld
    the analog is an action flipped to uniform-random with probability
    noise_scale.
    """
    expert = make_expert_controller(cfg)
    if cfg.env_id == "gridworld":
        def grid_act(state: EnvState) -> Action:
            if rng.uniform() < noise_scale:
                move = gridworld.MOVES[int(rng.integers(len(gridworld.MOVES)))]
                return Action(delta=(float(move[0]), float(move[1])))
            return expert(state)

        return grid_act

    def act(state: EnvState) -> Action:
        base = expert(state)
        vec = carry2d.encode_action(base)
        vec[0] += rng.normal(0.0, noise_scale * cfg.step_scale)
        vec[1] += rng.normal(0.0, noise_scale * cfg.step_scale)
        vec[2] += rng.normal(0.0, noise_scale)
        return carry2d.decode_action(vec, cfg)

    return act


class PartialController:
    """Carry toward the goal but release short, at 2..6 goal tolerances."""

    def __init__(self, cfg: EnvConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.exhausted = False
        self.release_dist = float(rng.uniform(2.0, 6.0)) * cfg.goal_tol
        self._released = False

    def __call__(self, state: EnvState) -> Action:
        cfg = self.cfg
        s = cfg.step_scale
        if self._released:
            self.exhausted = True
            return Action(delta=(0.0, 0.0))
        if state.attached:
            gx, gy = cfg.goal[0] - state.obj[0], cfg.goal[1] - state.obj[1]
            dist = float(np.hypot(gx, gy))
            if dist <= self.release_dist + 1e-12:
                self._released = True
                return Action(delta=(0.0, 0.0), attach_toggle=True)
            # step exactly onto the release circle, never past it
            scale = min(s, dist - self.release_dist) / dist
            return Action(delta=(gx * scale, gy * scale))
        ox, oy = state.obj[0] - state.agent[0], state.obj[1] - state.agent[1]
        if np.hypot(ox, oy) <= 0.5 * carry2d.grab_radius(cfg):
            return Action(delta=(0.0, 0.0), attach_toggle=True)
        return Action(delta=_clamp_inf(ox, oy, s))


class GridPartialController:
    def __init__(self, cfg: EnvConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.exhausted = False
        self.stop_at = int(rng.integers(2, 7))
        self._expert = make_expert_controller(cfg)

    def __call__(self, state: EnvState) -> Action:
        if gridworld.goal_distance(state, self.cfg) <= self.stop_at:
            self.exhausted = True
            return Action(delta=(0.0, 0.0))
        return self._expert(state)


def run_controller(
    cfg: EnvConfig,
    controller: Controller,
    region: str,
    rng: np.random.Generator,
    seed: int,
    source: str,
    expert: bool,
    max_steps: int | None = None,
) -> Trajectory:
    """Roll a controller and record the trajectory in observation space."""
    state = envs.reset(cfg, region, rng)
    states = [envs.observe(state, cfg)]
    actions: list[np.ndarray] = []
    success = envs.is_success(state, cfg)
    terminal = success
    limit = cfg.horizon if max_steps is None else min(max_steps, cfg.horizon)
    while not envs.is_done(state, cfg) and len(actions) < limit:
        action = controller(state)
        if getattr(controller, "exhausted", False):
            break
        state, done, succ = envs.step(state, action, cfg)
        actions.append(_encode(action, cfg))
        states.append(envs.observe(state, cfg))
        if succ:
            success = True
            terminal = True
    if not actions:
        raise GenerationError(f"controller produced an empty trajectory (seed {seed})")
    return trajectory_from_arrays(
        states=np.array(states),
        actions=np.array(actions),
        expert=expert,
        terminal=terminal,
        success=success,
        source=source,
        env_id=cfg.env_id,
        seed=seed,
    )


def _encode(action: Action, cfg: EnvConfig) -> np.ndarray:
    if cfg.env_id == "carry2d":
        return carry2d.encode_action(action)
    return np.array(action.delta, dtype=np.float64)


def _spawn_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**62))


def generate_expert(cfg: EnvConfig, n: int, rng: np.random.Generator) -> list[Trajectory]:
    """n successful demonstrations from p0; raises if any fails."""
    trajs = []
    controller = make_expert_controller(cfg)
    for _ in range(n):
        seed = _spawn_seed(rng)
        traj = run_controller(
            cfg, controller, "p0", np.random.default_rng(seed), seed, "expert", expert=True
        )
        if not traj.success:
            raise GenerationError(f"scripted expert failed (seed {seed})")
        trajs.append(traj)
    return trajs


def generate_play(cfg: EnvConfig, n: int, rng: np.random.Generator) -> list[Trajectory]:
    """n undirected trajectories from p_test; success only by accident.

    Resets that are terminal out of the box (object sampled already on the
    goal) carry no transitions and are resampled.
    """
    trajs: list[Trajectory] = []
    while len(trajs) < n:
        seed = _spawn_seed(rng)
        child = np.random.default_rng(seed)
        controller = make_play_controller(cfg, child)
        try:
            traj = run_controller(cfg, controller, "p_test", child, seed, "play", expert=False)
        except GenerationError:
            continue
        trajs.append(traj)
    return trajs


def generate_suboptimal(
    cfg: EnvConfig, n: int, rng: np.random.Generator, mode: str = "noisy"
) -> list[Trajectory]:
    """Degraded expert attempts from p0.

    noisy: per-step action noise, fails often; early_stop: expert truncated
    at a uniform 30..80% of its completed length; partial: carries the
    object toward the goal but releases 2..6 tolerances short.
    """
    if mode not in SUBOPTIMAL_MODES:
        raise ConfigError(f"unknown suboptimal mode {mode!r}")
    trajs = []
    for _ in range(n):
        seed = _spawn_seed(rng)
        child = np.random.default_rng(seed)
        if mode == "noisy":
            controller = make_noisy_controller(cfg, child)
            traj = run_controller(
                cfg, controller, "p0", child, seed, "suboptimal", expert=False
            )
        elif mode == "partial":
            if cfg.env_id == "gridworld":
                controller = GridPartialController(cfg, child)
            else:
                controller = PartialController(cfg, child)
            traj = run_controller(cfg, controller, "p0", child, seed, "failure", expert=False)
        else:
            full = run_controller(
                cfg,
                make_expert_controller(cfg),
                "p0",
                child,
                seed,
                "failure",
                expert=False,
            )
            frac = child.uniform(0.3, 0.8)
            cut = max(1, int(np.floor(frac * len(full))))
            traj = trajectory_from_arrays(
                states=np.array(
                    [t.state for t in full.transitions[:cut]]
                    + [full.transitions[cut - 1].next_state]
                ),
                actions=np.array([t.action for t in full.transitions[:cut]]),
                expert=False,
                terminal=False,
                success=False,
                source="failure",
                env_id=cfg.env_id,
                seed=seed,
            )
        trajs.append(traj)
    return trajs


def final_object_goal_distance(traj: Trajectory, cfg: EnvConfig) -> float:
    last = traj.transitions[-1].next_state
    if cfg.env_id == "carry2d":
        return float(np.hypot(last[2] - cfg.goal[0], last[3] - cfg.goal[1]))
    state = gridworld.state_from_obs(last, cfg)
    return gridworld.goal_distance(state, cfg)


def build_dataset(
    cfg: EnvConfig,
    expert: list[Trajectory],
    nonexpert: list[Trajectory],
    seeds: dict | None = None,
) -> Dataset:
    return Dataset(
        expert_trajs=expert,
        nonexpert_trajs=nonexpert,
        metadata={
            "env": cfg.to_json(),
            "env_hash": config_hash(cfg.to_json()),
            "seeds": seeds or {},
        },
    )
