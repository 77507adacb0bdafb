"""Furniture-free indoor mapping from a vertical spinning Lidar."""

from ffmap._core import (
    Config,
    beam_angle,
    evaluate,
    fit_plane,
    forward_difference,
    grid_agreement,
    run,
    simulate,
    surface_area,
    transform_point,
)

__all__ = [
    "Config",
    "beam_angle",
    "evaluate",
    "fit_plane",
    "forward_difference",
    "grid_agreement",
    "run",
    "simulate",
    "surface_area",
    "transform_point",
]
