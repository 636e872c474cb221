"""Commensurate predictive priors and their aggregation into one collective prior.

Two aggregation rules are provided.  The precision-weighted rule is the one to
use for design: its precision is a plain sum of per-source precisions, so it is
monotone in every discrepancy weight.  The legacy exponential-synthesis rule is
kept behind an explicit method tag because it is nonmonotone in the weights;
it exists to demonstrate and regression-test that defect, not for design use.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .stats import GammaMixtureHyperparams, inverse_gamma_mixture_mean

# Sources with posterior variance below this are accepted but flagged: their
# precision dominates the aggregate and usually signals a data-entry problem.
DEGENERATE_TAU_SQ = 1e-12


class WeightKind(Enum):
    RAW = "raw"
    TRANSFORMED = "transformed"


class AggregationMethod(Enum):
    PRECISION_WEIGHTED = "precision-weighted"
    LEGACY = "legacy"


@dataclass(frozen=True)
class HistoricalSource:
    """One summarized historical trial: effect estimate and its posterior variance."""

    id: str
    theta: float
    tau_sq: float

    def __post_init__(self) -> None:
        if not (isinstance(self.theta, (int, float)) and math.isfinite(self.theta)):
            raise ValueError(f"theta must be finite, got {self.theta!r}")
        if not (isinstance(self.tau_sq, (int, float)) and self.tau_sq > 0 and math.isfinite(self.tau_sq)):
            raise ValueError(f"tau_sq must be a positive finite number, got {self.tau_sq!r}")


@dataclass(frozen=True)
class WeightVector:
    """Per-source discrepancy weights, tagged raw (elicited) or transformed.

    The tag lets design formulas warn when fed raw weights: plugging elicited
    weights straight into the sample-size formula silently over-discounts.
    """

    values: tuple[float, ...]
    kind: WeightKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for i, v in enumerate(self.values):
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"weights[{i}] must lie in [0, 1], got {v!r}")

    @classmethod
    def raw(cls, values: Iterable[float]) -> "WeightVector":
        return cls(tuple(values), WeightKind.RAW)

    @classmethod
    def transformed(cls, values: Iterable[float]) -> "WeightVector":
        return cls(tuple(values), WeightKind.TRANSFORMED)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]


@dataclass(frozen=True)
class CollectivePrior:
    """Aggregated normal prior for the treatment effect in the new trial."""

    mean: float
    variance: float
    synthesis_weights: tuple[float, ...]
    method: AggregationMethod
    built_from: WeightKind
    near_degenerate: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not (self.variance > 0 and math.isfinite(self.variance)):
            raise ValueError(f"prior variance must be positive, got {self.variance!r}")

    @property
    def precision(self) -> float:
        return 1.0 / self.variance


def commensurate_variance(source: HistoricalSource, w: float, hyper: GammaMixtureHyperparams) -> float:
    """Predictive-prior variance for one source: tau_sq plus the mixture-mean inflation."""
    return source.tau_sq + inverse_gamma_mixture_mean(w, hyper)


def _check_inputs(sources: Sequence[HistoricalSource], weights: WeightVector) -> None:
    if len(sources) == 0:
        raise ValueError("at least one historical source is required")
    if len(weights) != len(sources):
        raise ValueError(f"{len(weights)} weights given for {len(sources)} sources")


def _source_precisions(
    sources: Sequence[HistoricalSource], weights: WeightVector, hyper: GammaMixtureHyperparams
) -> list[float]:
    # The single place reciprocals are taken: synthesis weights and the prior
    # variance must come from identical precision values or they drift apart.
    return [1.0 / commensurate_variance(s, w, hyper) for s, w in zip(sources, weights)]


def _flag_degenerate(sources: Sequence[HistoricalSource]) -> tuple[str, ...]:
    return tuple(s.id for s in sources if s.tau_sq < DEGENERATE_TAU_SQ)


def aggregate_precision_weighted(
    sources: Sequence[HistoricalSource], weights: WeightVector, hyper: GammaMixtureHyperparams
) -> CollectivePrior:
    """Aggregate predictive priors by adding precisions (the recommended rule).

    Prior precision is the sum of per-source precisions; the mean weights each
    source's estimate by its share of that total.
    """
    _check_inputs(sources, weights)
    precisions = _source_precisions(sources, weights, hyper)
    total = sum(precisions)
    synthesis = tuple(p / total for p in precisions)
    mean = sum(p_q * s.theta for p_q, s in zip(synthesis, sources))
    return CollectivePrior(
        mean=mean,
        variance=1.0 / total,
        synthesis_weights=synthesis,
        method=AggregationMethod.PRECISION_WEIGHTED,
        built_from=weights.kind,
        near_degenerate=_flag_degenerate(sources),
    )


def synthesis_weights_legacy(weights: WeightVector, c0: float) -> tuple[float, ...]:
    """Exponential synthesis weights: softmax of -w^2 / c0.

    Stabilized by shifting exponents so the largest is zero; entries stay in
    (0, 1] and sum to 1 even for very small c0.
    """
    if not (isinstance(c0, (int, float)) and c0 > 0):
        raise ValueError(f"c0 must be positive, got {c0!r}")
    exponents = [-(w * w) / c0 for w in weights]
    shift = max(exponents)
    raw = [math.exp(e - shift) for e in exponents]
    total = sum(raw)
    return tuple(r / total for r in raw)


def aggregate_legacy(
    sources: Sequence[HistoricalSource], weights: WeightVector, hyper: GammaMixtureHyperparams
) -> CollectivePrior:
    """Aggregate by the legacy convolution rule: mean sum(p_q theta_q), variance sum(p_q^2 xi_q^2).

    Nonmonotone in the weights whenever there is more than one source; retained
    for comparison and regression tests only.
    """
    _check_inputs(sources, weights)
    if hyper.c0 is None:
        raise ValueError("legacy aggregation requires the concentration parameter c0")
    synthesis = synthesis_weights_legacy(weights, hyper.c0)
    mean = sum(p_q * s.theta for p_q, s in zip(synthesis, sources))
    variance = sum(
        p_q * p_q * commensurate_variance(s, w, hyper)
        for p_q, s, w in zip(synthesis, sources, weights)
    )
    return CollectivePrior(
        mean=mean,
        variance=variance,
        synthesis_weights=synthesis,
        method=AggregationMethod.LEGACY,
        built_from=weights.kind,
        near_degenerate=_flag_degenerate(sources),
    )
