"""Hopf bifurcation analysis of planar polynomial systems."""

from ._core import (
    HopfkitError,
    InputError,
    NumericError,
    System,
    a_of_tau,
    analyze,
    atlas_names,
    atlas_system,
    classify,
    find_cycles,
    jacobian_summary,
    parse_system,
    predict_cycles,
    sweep,
)

__all__ = [
    "HopfkitError",
    "InputError",
    "NumericError",
    "System",
    "a_of_tau",
    "analyze",
    "atlas_names",
    "atlas_system",
    "classify",
    "find_cycles",
    "jacobian_summary",
    "parse_system",
    "predict_cycles",
    "sweep",
]
