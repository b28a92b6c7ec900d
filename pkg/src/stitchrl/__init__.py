"""Offline RL on mixed expert/non-expert trajectories at desk scale."""

__version__ = "0.1.0"
