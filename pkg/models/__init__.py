"""Domain models shared by services, workers and the CLI."""

from .composition import Composition, parse_composition, render_composition
from .jump_spec import JumpSpec
from .path import JumpSegment, Path, Phi, Step, Swap, parse_path, parse_step
from .spec_point import SpecPoint
from .staircase_params import StaircaseParams

__all__ = [
    "Composition",
    "JumpSegment",
    "JumpSpec",
    "Path",
    "Phi",
    "SpecPoint",
    "StaircaseParams",
    "Step",
    "Swap",
    "parse_composition",
    "parse_path",
    "parse_step",
    "render_composition",
]
