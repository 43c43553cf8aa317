"""Proximal point flows of convex functions on hyperbolic model spaces.

Points are pairs: (edge, offset) on trees and (u, v) on the planar models.
Spaces and functions are built from the same JSON documents the CLI reads.
"""

import json as _json

from ._hypflow import (
    ConfigError,
    ConvexityError,
    DomainError,
    Function,
    RangeError,
    SolverError,
    Space,
    descending_slope,
    estimate_delta,
    prox,
    run_flow,
    slope_report,
    tau_threshold,
)
from ._hypflow import run_experiment as _run_experiment


def space(doc):
    """Space from a dict or JSON string."""
    return Space.from_json(doc if isinstance(doc, str) else _json.dumps(doc))


def function(space_, doc):
    """Convex function on `space_` from a dict or JSON string."""
    return Function.from_json(space_, doc if isinstance(doc, str) else _json.dumps(doc))


def run_experiment(config):
    """Runs a full experiment config; returns (summary dict, trajectory csv text)."""
    summary, csv = _run_experiment(config if isinstance(config, str) else _json.dumps(config))
    return _json.loads(summary), csv


__all__ = [
    "ConfigError",
    "ConvexityError",
    "DomainError",
    "Function",
    "RangeError",
    "SolverError",
    "Space",
    "descending_slope",
    "estimate_delta",
    "function",
    "prox",
    "run_experiment",
    "run_flow",
    "slope_report",
    "space",
    "tau_threshold",
]
