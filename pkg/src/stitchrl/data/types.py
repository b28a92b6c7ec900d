"""Transition, trajectory, and dataset containers.

Expert/non-expert membership is carried both per transition (the learner
consumes flat transition arrays) and structurally by which list of the
Dataset a trajectory sits in; the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ContractViolationError

SOURCES = ("expert", "play", "suboptimal", "failure", "rollout")


@dataclass(eq=False)
class Transition:
    """One (s, a, s') tuple. Augmented samples have no observed successor
    and carry next_state=None; they are only ever used for policy fitting."""

    state: np.ndarray
    action: np.ndarray
    next_state: np.ndarray | None
    expert: bool
    terminal: bool = False

    def __post_init__(self):
        self.state = np.asarray(self.state, dtype=np.float64)
        self.action = np.asarray(self.action, dtype=np.float64)
        if self.next_state is not None:
            self.next_state = np.asarray(self.next_state, dtype=np.float64)
        for name, vec in (("state", self.state), ("action", self.action),
                          ("next_state", self.next_state)):
            if vec is not None and not np.all(np.isfinite(vec)):
                raise ContractViolationError(f"non-finite values in transition {name}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transition):
            return NotImplemented
        if (self.next_state is None) != (other.next_state is None):
            return False
        return (
            np.array_equal(self.state, other.state)
            and np.array_equal(self.action, other.action)
            and (self.next_state is None or np.array_equal(self.next_state, other.next_state))
            and self.expert == other.expert
            and self.terminal == other.terminal
        )


@dataclass(eq=False)
class Trajectory:
    transitions: list[Transition]
    success: bool
    source: str
    env_id: str
    seed: int

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ContractViolationError(f"unknown trajectory source {self.source!r}")
        for i in range(len(self.transitions) - 1):
            a, b = self.transitions[i], self.transitions[i + 1]
            if a.next_state is None or not np.array_equal(a.next_state, b.state):
                raise ContractViolationError(
                    f"transition chaining broken at step {i} of a {self.source} trajectory"
                )
            if a.terminal:
                raise ContractViolationError("terminal transition before trajectory end")

    def __len__(self) -> int:
        return len(self.transitions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.transitions == other.transitions
            and self.success == other.success
            and self.source == other.source
            and self.env_id == other.env_id
            and self.seed == other.seed
        )


@dataclass(eq=False)
class Dataset:
    expert_trajs: list[Trajectory] = field(default_factory=list)
    nonexpert_trajs: list[Trajectory] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for traj in self.expert_trajs:
            if not traj.success:
                raise ContractViolationError("expert trajectory without success flag")
            if any(not t.expert for t in traj.transitions):
                raise ContractViolationError("expert trajectory with non-expert transition")
        for traj in self.nonexpert_trajs:
            if any(t.expert for t in traj.transitions):
                raise ContractViolationError("non-expert trajectory with expert transition")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.expert_trajs == other.expert_trajs
            and self.nonexpert_trajs == other.nonexpert_trajs
            and self.metadata == other.metadata
        )

    def all_trajs(self) -> list[Trajectory]:
        return list(self.expert_trajs) + list(self.nonexpert_trajs)

    def n_transitions(self) -> int:
        return sum(len(t) for t in self.all_trajs())

    def counts(self) -> tuple[int, int]:
        return len(self.expert_trajs), len(self.nonexpert_trajs)


def trajectory_from_arrays(
    states: np.ndarray,
    actions: np.ndarray,
    expert: bool,
    terminal: bool,
    success: bool,
    source: str,
    env_id: str,
    seed: int,
) -> Trajectory:
    """Build a trajectory from packed arrays: states has one more row than
    actions; `terminal` flags the final transition (environment-terminal,
    not horizon truncation)."""
    n = len(actions)
    if len(states) != n + 1:
        raise ContractViolationError(f"need {n + 1} states for {n} actions, got {len(states)}")
    transitions = [
        Transition(
            state=states[i],
            action=actions[i],
            next_state=states[i + 1],
            expert=expert,
            terminal=(terminal and i == n - 1),
        )
        for i in range(n)
    ]
    return Trajectory(
        transitions=transitions, success=success, source=source, env_id=env_id, seed=seed
    )
