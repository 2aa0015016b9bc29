"""Simulation and bounds for one-big-jump large deviations of heavy-tailed sums."""

from .dist import TailModel, Variant
from .events import EventClass, EventKind, EventParams, classify, partition_check, refined_ok
from .mc import (
    Estimate,
    Method,
    estimate_crude,
    estimate_decomposition,
    estimate_one_big,
    estimate_one_mid,
    estimate_refined,
)
from .regime import RegimeRatios, default_cb, ratios, sequence

__version__ = "0.1.0"

__all__ = [
    "TailModel",
    "Variant",
    "EventClass",
    "EventKind",
    "EventParams",
    "classify",
    "partition_check",
    "refined_ok",
    "Estimate",
    "Method",
    "estimate_crude",
    "estimate_decomposition",
    "estimate_one_big",
    "estimate_one_mid",
    "estimate_refined",
    "RegimeRatios",
    "default_cb",
    "ratios",
    "sequence",
]
