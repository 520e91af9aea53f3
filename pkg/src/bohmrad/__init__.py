"""Bohmian double-slit trajectories, quantum potential and canyon-crossing radiation."""

from .constants import constants, override_constants
from .wavefield import FIGURE2, SHOWCASE, ExperimentConfig

__all__ = ["ExperimentConfig", "SHOWCASE", "FIGURE2", "constants", "override_constants"]
__version__ = "0.1.0"
