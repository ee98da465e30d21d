"""Exact generating-function algebra for local, log and relative Gromov-Witten invariants of surfaces."""

from .errors import GWSeriesError
from .genus_series import (
    GenusSeries,
    gs_add,
    gs_coefficient,
    gs_invert,
    gs_mul,
    gs_rescale_h,
    kernel_k1,
    kernel_sin_power,
    kernel_v2,
    kernel_v3,
)
from .invariant_store import InvariantKind, InvariantTable, NovikovSeries, StationaryOracle, load_dataset
from .surface_lattice import F1, P2, PRESETS, CurveClass, SurfacePreset

__version__ = "0.1.0"

__all__ = [
    "GWSeriesError",
    "GenusSeries",
    "gs_add",
    "gs_mul",
    "gs_invert",
    "gs_rescale_h",
    "gs_coefficient",
    "kernel_v3",
    "kernel_v2",
    "kernel_k1",
    "kernel_sin_power",
    "InvariantKind",
    "InvariantTable",
    "NovikovSeries",
    "StationaryOracle",
    "load_dataset",
    "CurveClass",
    "SurfacePreset",
    "PRESETS",
    "P2",
    "F1",
]
