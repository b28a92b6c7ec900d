"""Dataset containers, scripted data generation, and serialization."""

from .generate import (
    SUBOPTIMAL_MODES,
    build_dataset,
    final_object_goal_distance,
    generate_expert,
    generate_play,
    generate_suboptimal,
    make_expert_controller,
    run_controller,
)
from .io import dumps_dataset, load_dataset, loads_dataset, save_dataset
from .types import SOURCES, Dataset, Trajectory, Transition, trajectory_from_arrays

__all__ = [
    "SOURCES",
    "SUBOPTIMAL_MODES",
    "Dataset",
    "Trajectory",
    "Transition",
    "build_dataset",
    "dumps_dataset",
    "final_object_goal_distance",
    "generate_expert",
    "generate_play",
    "generate_suboptimal",
    "load_dataset",
    "loads_dataset",
    "make_expert_controller",
    "run_controller",
    "save_dataset",
    "trajectory_from_arrays",
]
