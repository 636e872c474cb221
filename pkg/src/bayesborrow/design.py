"""Minimal sample sizes (or event counts) for all endpoint models.

Every formula has the same skeleton: an information target
``((z_eta + z_zeta) / delta)^2`` minus whatever precision the prior already
supplies, scaled by the endpoint's variance factor.  A prior precise enough to
decide on its own yields n = 0 with ``decisive_by_prior`` set rather than an
error.
"""

from __future__ import annotations

import itertools
import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from .borrowing import (
    AggregationMethod,
    CollectivePrior,
    HistoricalSource,
    WeightKind,
    WeightVector,
    aggregate_precision_weighted,
    aggregate_legacy,
)
from .linearize import linearize_all
from .stats import GammaMixtureHyperparams, Probability, check_probability, std_normal_quantile


class RawWeightsWarning(UserWarning):
    """Design fed a prior built from raw (untransformed) weights."""


class LegacyAggregationWarning(UserWarning):
    """Design fed a legacy-aggregation prior, which is nonmonotone in the weights."""


_RAW_WEIGHTS_MESSAGE = (
    "prior was built from raw elicited weights; raw weights over-discount "
    "(for the bundled reference scenario they inflate n from 176 to 332). "
    "Linearize the weights first unless over-discounting is intended."
)
_LEGACY_MESSAGE = (
    "prior uses the legacy exponential-synthesis aggregation, which is "
    "nonmonotone in the discrepancy weights; use the precision-weighted rule "
    "for design."
)


@dataclass(frozen=True)
class DesignParams:
    """Decision thresholds and new-trial assumptions shared by the formulas.

    ``sigma0_sq`` is only needed for the normal endpoint, ``s0_sq``/``mu0``
    for the no-borrowing prior and ``alpha``/``beta`` for the frequentist
    formula; each is validated where used.
    """

    delta: float
    R: float
    eta: Probability
    zeta: Probability
    sigma0_sq: float | None = None
    mu0: float = 0.0
    s0_sq: float | None = None
    alpha: Probability | None = None
    beta: Probability | None = None

    def __post_init__(self) -> None:
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be positive and finite, got {self.delta!r}")
        check_probability(self.R, "R", open_interval=True)
        check_probability(self.eta, "eta", open_interval=True)
        check_probability(self.zeta, "zeta", open_interval=True)
        if self.sigma0_sq is not None and not (self.sigma0_sq > 0 and math.isfinite(self.sigma0_sq)):
            raise ValueError(f"sigma0_sq must be positive and finite, got {self.sigma0_sq!r}")
        if self.s0_sq is not None and not self.s0_sq > 0:  # +inf allowed: a vague prior
            raise ValueError(f"s0_sq must be positive, got {self.s0_sq!r}")
        if not (isinstance(self.mu0, (int, float)) and math.isfinite(self.mu0)):
            raise ValueError(f"mu0 must be finite, got {self.mu0!r}")
        if self.alpha is not None:
            check_probability(self.alpha, "alpha", open_interval=True)
        if self.beta is not None:
            check_probability(self.beta, "beta", open_interval=True)


@dataclass(frozen=True)
class NormalEndpoint:
    """Continuous outcome with known common variance; delta on the outcome scale."""

    sigma0_sq: float

    def __post_init__(self) -> None:
        if not (self.sigma0_sq > 0 and math.isfinite(self.sigma0_sq)):
            raise ValueError(f"sigma0_sq must be positive and finite, got {self.sigma0_sq!r}")


@dataclass(frozen=True)
class BinaryTwoArmEndpoint:
    """Binary outcomes in both arms; delta on the log odds-ratio scale."""

    rho_t: Probability
    rho_c: Probability

    def __post_init__(self) -> None:
        check_probability(self.rho_t, "rho_t", open_interval=True)
        check_probability(self.rho_c, "rho_c", open_interval=True)


@dataclass(frozen=True)
class TimeToEventEndpoint:
    """Exponential event times; delta on the log rate-ratio scale, output in events."""


@dataclass(frozen=True)
class SingleArmBinaryEndpoint:
    """Single-arm binary outcome; delta on the log-odds scale."""

    p: Probability

    def __post_init__(self) -> None:
        check_probability(self.p, "p", open_interval=True)


EndpointModel = NormalEndpoint | BinaryTwoArmEndpoint | TimeToEventEndpoint | SingleArmBinaryEndpoint


@dataclass(frozen=True)
class SampleSizeResult:
    """A rounded size with its pre-rounding bound and rounding provenance.

    ``convention`` says what ``n`` counts (total patients, per-arm patients,
    or total events); ``rounding`` records how the integer was reached.
    """

    n_real: float
    n: int
    per_arm: int | None
    prior_precision_used: float
    decisive_by_prior: bool
    convention: str
    rounding: str


def required_precision(delta: float, eta: Probability, zeta: Probability) -> float:
    """Posterior precision needed for a guaranteed efficacy-or-futility verdict."""
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError(f"delta must be positive and finite, got {delta!r}")
    check_probability(eta, "eta", open_interval=True)
    check_probability(zeta, "zeta", open_interval=True)
    z_sum = std_normal_quantile(eta) + std_normal_quantile(zeta)
    return (z_sum / delta) ** 2


def _allocation_denominator(R: float) -> int | None:
    frac = Fraction(R).limit_denominator(1000)
    if abs(R - float(frac)) <= 1e-9:
        return frac.denominator
    return None


def _snap(x: float) -> float:
    # Upstream float fuzz must not push an exact boundary over the next block.
    nearest = round(x)
    if abs(x - nearest) <= 1e-9 * max(1.0, abs(x)):
        return float(nearest)
    return x


def _round_allocation_info(n_real: float, R: float) -> tuple[int, str]:
    if not math.isfinite(n_real):
        raise ValueError(f"n_real must be finite, got {n_real!r}")
    check_probability(R, "R", open_interval=True)
    target = _snap(max(n_real, 0.0))
    denom = _allocation_denominator(R)
    if denom is None:
        warnings.warn(
            f"allocation ratio {R!r} has no denominator <= 1000; rounding up "
            "without making both arms integral",
            UserWarning,
            stacklevel=3,
        )
        return int(math.ceil(target)), "ceiling (allocation has no small denominator)"
    blocks = int(math.ceil(_snap(target / denom)))
    if denom == 2:
        description = "next even total (R = 1/2)"
    else:
        frac = Fraction(R).limit_denominator(1000)
        description = f"next multiple of {denom} (R = {frac.numerator}/{frac.denominator})"
    return blocks * denom, description


def round_allocation(n_real: float, R: float) -> int:
    """Smallest integer n >= max(n_real, 0) with n*R and n*(1-R) integral.

    Falls back to a plain ceiling (with a warning) when R has no denominator
    up to 1000.
    """
    n, _ = _round_allocation_info(n_real, R)
    return n


def _finish_total(n_real: float, R: float, prior_precision: float, convention: str) -> SampleSizeResult:
    decisive = n_real <= 0
    clamped = max(n_real, 0.0)
    n, rounding = _round_allocation_info(clamped, R)
    per_arm = None
    if _allocation_denominator(R) is not None and convention == "total":
        per_arm = int(round(n * R))
    return SampleSizeResult(
        n_real=clamped,
        n=n,
        per_arm=per_arm,
        prior_precision_used=prior_precision,
        decisive_by_prior=decisive,
        convention=convention,
        rounding=rounding,
    )


def _normal_total(design: DesignParams, prior_precision: float) -> SampleSizeResult:
    if design.sigma0_sq is None:
        raise ValueError("sigma0_sq is required for the normal endpoint")
    scale = design.sigma0_sq / (design.R * (1.0 - design.R))
    n_real = scale * (required_precision(design.delta, design.eta, design.zeta) - prior_precision)
    return _finish_total(n_real, design.R, prior_precision, "total")


def sample_size_frequentist(design: DesignParams) -> SampleSizeResult:
    """Classical normal-endpoint total sample size from alpha and beta."""
    if design.alpha is None or design.beta is None:
        raise ValueError("alpha and beta are required for the frequentist formula")
    if design.sigma0_sq is None:
        raise ValueError("sigma0_sq is required for the normal endpoint")
    scale = design.sigma0_sq / (design.R * (1.0 - design.R))
    n_real = scale * required_precision(design.delta, 1.0 - design.alpha, 1.0 - design.beta)
    return _finish_total(n_real, design.R, 0.0, "total")


def sample_size_no_borrow(design: DesignParams) -> SampleSizeResult:
    """Bayesian normal-endpoint total with only the vague prior (mu0, s0_sq)."""
    if design.s0_sq is None:
        raise ValueError("s0_sq is required for the no-borrowing formula")
    return _normal_total(design, 1.0 / design.s0_sq)


def sample_size_borrow_normal(design: DesignParams, prior: CollectivePrior) -> SampleSizeResult:
    """Normal-endpoint total with the collective prior's precision subtracted."""
    if prior.method is AggregationMethod.LEGACY:
        warnings.warn(_LEGACY_MESSAGE, LegacyAggregationWarning, stacklevel=2)
    if prior.built_from is WeightKind.RAW:
        warnings.warn(_RAW_WEIGHTS_MESSAGE, RawWeightsWarning, stacklevel=2)
    return _normal_total(design, prior.precision)


def sample_size_binary_two_arm(
    rho_t: Probability,
    rho_c: Probability,
    delta: float,
    eta: Probability,
    zeta: Probability,
    prior_precision: float = 0.0,
) -> SampleSizeResult:
    """Per-arm n for a two-arm binary trial (equal arms, log odds-ratio scale)."""
    check_probability(rho_t, "rho_t", open_interval=True)
    check_probability(rho_c, "rho_c", open_interval=True)
    variance_factor = 1.0 / (rho_t * (1.0 - rho_t)) + 1.0 / (rho_c * (1.0 - rho_c))
    n_real = variance_factor * (required_precision(delta, eta, zeta) - prior_precision)
    decisive = n_real <= 0
    clamped = max(n_real, 0.0)
    n = int(math.ceil(_snap(clamped)))
    return SampleSizeResult(
        n_real=clamped,
        n=n,
        per_arm=n,
        prior_precision_used=prior_precision,
        decisive_by_prior=decisive,
        convention="per-arm",
        rounding="ceiling (per arm)",
    )


def events_required_tte(
    delta: float,
    R: float,
    eta: Probability,
    zeta: Probability,
    prior_precision: float = 0.0,
) -> SampleSizeResult:
    """Total events for an exponential time-to-event trial (log rate-ratio scale)."""
    check_probability(R, "R", open_interval=True)
    d_real = (required_precision(delta, eta, zeta) - prior_precision) / (R * (1.0 - R))
    decisive = d_real <= 0
    clamped = max(d_real, 0.0)
    n, rounding = _round_allocation_info(clamped, R)
    return SampleSizeResult(
        n_real=clamped,
        n=n,
        per_arm=None,
        prior_precision_used=prior_precision,
        decisive_by_prior=decisive,
        convention="events",
        rounding=rounding,
    )


def sample_size_single_arm_binary(
    p: Probability,
    delta: float,
    eta: Probability,
    zeta: Probability,
    prior_precision: float = 0.0,
) -> SampleSizeResult:
    """Total n for a single-arm binary trial (log-odds scale)."""
    check_probability(p, "p", open_interval=True)
    n_real = (required_precision(delta, eta, zeta) - prior_precision) / (p * (1.0 - p))
    decisive = n_real <= 0
    clamped = max(n_real, 0.0)
    n = int(math.ceil(_snap(clamped)))
    return SampleSizeResult(
        n_real=clamped,
        n=n,
        per_arm=None,
        prior_precision_used=prior_precision,
        decisive_by_prior=decisive,
        convention="total",
        rounding="ceiling",
    )


def sample_size_for_endpoint(
    endpoint: EndpointModel, design: DesignParams, prior_precision: float
) -> SampleSizeResult:
    """Dispatch to the formula matching the endpoint model."""
    if isinstance(endpoint, NormalEndpoint):
        if design.sigma0_sq is None:
            design = replace(design, sigma0_sq=endpoint.sigma0_sq)
        return _normal_total(design, prior_precision)
    if isinstance(endpoint, BinaryTwoArmEndpoint):
        return sample_size_binary_two_arm(
            endpoint.rho_t, endpoint.rho_c, design.delta, design.eta, design.zeta, prior_precision
        )
    if isinstance(endpoint, TimeToEventEndpoint):
        return events_required_tte(design.delta, design.R, design.eta, design.zeta, prior_precision)
    if isinstance(endpoint, SingleArmBinaryEndpoint):
        return sample_size_single_arm_binary(
            endpoint.p, design.delta, design.eta, design.zeta, prior_precision
        )
    raise TypeError(f"unknown endpoint model: {endpoint!r}")


@dataclass(frozen=True)
class SweepTable:
    """Grid evaluation of prior precisions and pre-rounding sample sizes."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]


def sweep_surface(
    sources: Sequence[HistoricalSource],
    weights: WeightVector,
    hyper: GammaMixtureHyperparams,
    design: DesignParams,
    axes: Sequence[int],
    grid_step: float,
) -> SweepTable:
    """Sweep one or two weight coordinates over [0, 1].

    Emits pre-rounding n so the shape of the surface is visible (rounding
    plateaus would mask the linearity the transform produces).  Non-axis
    coordinates are held at the values in ``weights``.
    """
    if weights.kind is not WeightKind.RAW:
        raise ValueError("sweep_surface varies raw weights; pass the elicited vector")
    if len(weights) != len(sources):
        raise ValueError(f"{len(weights)} weights given for {len(sources)} sources")
    if not (0.0 < grid_step <= 0.5):
        raise ValueError(f"grid_step must lie in (0, 0.5], got {grid_step!r}")
    if len(axes) not in (1, 2) or len(set(axes)) != len(axes):
        raise ValueError("axes must name one or two distinct source indices")
    for axis in axes:
        if not (0 <= axis < len(sources)):
            raise ValueError(f"axis index {axis} out of range for {len(sources)} sources")
    if design.sigma0_sq is None:
        raise ValueError("sigma0_sq is required to emit sample-size columns")
    if hyper.c0 is None:
        raise ValueError("c0 is required to emit the legacy precision column")

    steps = max(1, int(round(1.0 / grid_step)))
    grid = [i / steps for i in range(steps + 1)]
    scale = design.sigma0_sq / (design.R * (1.0 - design.R))
    target = required_precision(design.delta, design.eta, design.zeta)

    columns = tuple(f"w{axis + 1}" for axis in axes) + (
        "prior_precision",
        "prior_precision_legacy",
        "n_real_raw",
        "n_real_linearized",
    )
    rows = []
    base = list(weights.values)
    for point in itertools.product(grid, repeat=len(axes)):
        current = list(base)
        for axis, value in zip(axes, point):
            current[axis] = value
        raw = WeightVector.raw(current)
        star = aggregate_precision_weighted(sources, raw, hyper)
        legacy = aggregate_legacy(sources, raw, hyper)
        linearized = aggregate_precision_weighted(sources, linearize_all(sources, raw, hyper), hyper)
        rows.append(
            tuple(point)
            + (
                star.precision,
                legacy.precision,
                scale * (target - star.precision),
                scale * (target - linearized.precision),
            )
        )
    return SweepTable(columns=columns, rows=tuple(rows))
