"""Environment configuration shared by both simulator backends."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError

ENV_IDS = ("carry2d", "gridworld")
REGIONS = ("p0", "p_test")


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, inclusive on both ends."""

    lo: tuple[float, float]
    hi: tuple[float, float]

    def __post_init__(self):
        if self.lo[0] > self.hi[0] or self.lo[1] > self.hi[1]:
            raise ConfigError(f"box has lo > hi: {self}")

    def contains(self, p, tol: float = 0.0) -> bool:
        return (
            self.lo[0] - tol <= p[0] <= self.hi[0] + tol
            and self.lo[1] - tol <= p[1] <= self.hi[1] + tol
        )

    def contains_box(self, other: "Box") -> bool:
        return self.contains(other.lo) and self.contains(other.hi)

    def sample(self, rng: np.random.Generator) -> tuple[float, float]:
        return (
            float(rng.uniform(self.lo[0], self.hi[0])),
            float(rng.uniform(self.lo[1], self.hi[1])),
        )

    def area(self) -> float:
        return (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])

    def to_json(self) -> dict:
        return {"lo": list(self.lo), "hi": list(self.hi)}

    @classmethod
    def from_json(cls, doc: dict) -> "Box":
        return cls(lo=tuple(doc["lo"]), hi=tuple(doc["hi"]))


@dataclass(frozen=True)
class EnvConfig:
    """Geometry and episode limits for one environment instance.

    `p0` is the narrow region object resets for expert demonstrations; it
    must sit strictly inside the wider evaluation region `p_test`. For the
    gridworld backend the boxes and goal are in cell coordinates.
    """

    env_id: str = "carry2d"
    horizon: int = 60
    goal: tuple[float, float] = (-0.5, -0.5)
    goal_tol: float = 0.1
    p0: Box = field(default_factory=lambda: Box((0.3, 0.3), (0.7, 0.7)))
    p_test: Box = field(default_factory=lambda: Box((-0.8, -0.8), (0.8, 0.8)))
    step_scale: float = 0.08
    grid_size: int = 8
    walls: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.env_id not in ENV_IDS:
            raise ConfigError(f"unknown env_id {self.env_id!r}")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.goal_tol <= 0:
            raise ConfigError("goal tolerance must be positive")
        if not self.p_test.contains_box(self.p0):
            raise ConfigError("p0 must lie inside p_test")
        if self.env_id == "gridworld" and self.grid_size < 2:
            raise ConfigError("grid_size must be >= 2")

    def region(self, name: str) -> Box:
        if name == "p0":
            return self.p0
        if name == "p_test":
            return self.p_test
        raise ConfigError(f"unknown region {name!r}")

    def region_area_ratio(self) -> float:
        return self.p_test.area() / max(self.p0.area(), 1e-12)

    def to_json(self) -> dict:
        return {
            "env_id": self.env_id,
            "horizon": self.horizon,
            "goal": list(self.goal),
            "goal_tol": self.goal_tol,
            "p0": self.p0.to_json(),
            "p_test": self.p_test.to_json(),
            "step_scale": self.step_scale,
            "grid_size": self.grid_size,
            "walls": [list(w) for w in self.walls],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EnvConfig":
        return cls(
            env_id=doc["env_id"],
            horizon=doc["horizon"],
            goal=tuple(doc["goal"]),
            goal_tol=doc["goal_tol"],
            p0=Box.from_json(doc["p0"]),
            p_test=Box.from_json(doc["p_test"]),
            step_scale=doc["step_scale"],
            grid_size=doc["grid_size"],
            walls=tuple(tuple(w) for w in doc.get("walls", [])),
        )


def carry2d_config(**overrides) -> EnvConfig:
    return EnvConfig(env_id="carry2d", **overrides)


def gridworld_config(**overrides) -> EnvConfig:
    """Gridworld defaults: 8x8 cells, goal in a corner, p0 near the goal."""
    defaults = dict(
        env_id="gridworld",
        horizon=30,
        goal=(0.0, 0.0),
        goal_tol=0.5,
        p0=Box((4.0, 4.0), (6.0, 6.0)),
        p_test=Box((0.0, 0.0), (7.0, 7.0)),
        step_scale=1.0,
        grid_size=8,
    )
    defaults.update(overrides)
    return EnvConfig(**defaults)


@dataclass(frozen=True)
class EnvState:
    """Simulator state; positions are tuples so states hash and compare."""

    agent: tuple[float, float]
    obj: tuple[float, float]
    attached: bool
    t: int


@dataclass(frozen=True)
class Action:
    """Movement delta plus a grab/release toggle request."""

    delta: tuple[float, float]
    attach_toggle: bool = False
