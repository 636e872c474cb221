"""Uniform-shrinkage transform of elicited discrepancy weights.

Each source's precision contribution xi^{-2}(w) is a Moebius function of w,
so most of the weight's effect is spent near w = 0.  Composing the straight
line between the endpoint precisions with the closed-form inverse of
xi^{-2} yields a transformed weight w' under which the precision (and hence
the pre-rounding sample size) is affine in the elicited w, with w = 0 and
w = 1 as exact fixed points.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .borrowing import HistoricalSource, WeightKind, WeightVector
from .stats import GammaMixtureHyperparams

# Absolute slack on the transformed weight when clamping to [0, 1]: float
# composition can land infinitesimally outside the interval.
_CLAMP_SLACK = 1e-12


@dataclass(frozen=True)
class PrecisionEndpoints:
    """Source precision at the two weight extremes (at_zero > at_one)."""

    at_zero: float
    at_one: float

    def __post_init__(self) -> None:
        if not (self.at_zero > self.at_one > 0):
            raise ValueError(
                f"endpoints must satisfy at_zero > at_one > 0, got ({self.at_zero!r}, {self.at_one!r})"
            )


def precision_endpoints(source: HistoricalSource, hyper: GammaMixtureHyperparams) -> PrecisionEndpoints:
    """Precision of the predictive prior at w = 0 and w = 1."""
    return PrecisionEndpoints(
        at_zero=1.0 / (source.tau_sq + hyper.borrow_scale),
        at_one=1.0 / (source.tau_sq + hyper.discount_scale),
    )


def interpolate_precision(w: float, ep: PrecisionEndpoints) -> float:
    """Straight line between the endpoint precisions; exact at w = 0 and w = 1."""
    if not (0.0 <= w <= 1.0):
        raise ValueError(f"weight must lie in [0, 1], got {w!r}")
    return (1.0 - w) * ep.at_zero + w * ep.at_one


def invert_precision(P: float, source: HistoricalSource, hyper: GammaMixtureHyperparams) -> float:
    """Weight w solving xi^{-2}(w) = P, clamped to [0, 1] within a small slack.

    P outside the closed interval [at_one, at_zero] beyond the slack is a
    range error.
    """
    ep = precision_endpoints(source, hyper)
    # Bit-equal endpoint inputs return exact fixed points.
    if P == ep.at_zero:
        return 0.0
    if P == ep.at_one:
        return 1.0
    if not (P > 0 and math.isfinite(P)):
        raise ValueError(f"precision must be positive and finite, got {P!r}")
    k1 = hyper.discount_scale
    k2 = hyper.borrow_scale
    w = (1.0 / P - source.tau_sq - k2) / (k1 - k2)
    if w < -_CLAMP_SLACK or w > 1.0 + _CLAMP_SLACK:
        raise ValueError(
            f"precision {P!r} lies outside the attainable range "
            f"[{ep.at_one!r}, {ep.at_zero!r}] for source {source.id!r}"
        )
    return min(max(w, 0.0), 1.0)


def linearize_weight(w: float, source: HistoricalSource, hyper: GammaMixtureHyperparams) -> float:
    """The uniform-shrinkage transform w -> w' for a single source.

    Strictly increasing with f(0) = 0 and f(1) = 1 exactly.
    """
    ep = precision_endpoints(source, hyper)
    return invert_precision(interpolate_precision(w, ep), source, hyper)


def linearize_all(
    sources: Sequence[HistoricalSource], weights: WeightVector, hyper: GammaMixtureHyperparams
) -> WeightVector:
    """Transform a raw weight vector elementwise; coordinate q depends only on source q."""
    if weights.kind is not WeightKind.RAW:
        raise ValueError("linearize_all expects raw weights; transforming twice is a mistake")
    if len(weights) != len(sources):
        raise ValueError(f"{len(weights)} weights given for {len(sources)} sources")
    return WeightVector.transformed(
        linearize_weight(w, s, hyper) for s, w in zip(sources, weights)
    )
