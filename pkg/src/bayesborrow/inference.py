"""Conjugate posterior updating and the efficacy/futility decision rule.

The compiled simulation kernel mirrors the arithmetic of
``posterior_update_precision``, ``prob_efficacy``, ``prob_futility`` and
``decide`` expression for expression; change one side only together with the
other (tests compare verdicts across the two paths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .borrowing import CollectivePrior
from .stats import Probability, check_probability, std_normal_cdf


class Verdict(Enum):
    EFFICACIOUS = "efficacious"
    FUTILE = "futile"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PosteriorSummary:
    """Posterior mean and variance of the treatment effect."""

    d: float
    var: float

    def __post_init__(self) -> None:
        if not (self.var > 0 and math.isfinite(self.var)):
            raise ValueError(f"posterior variance must be positive, got {self.var!r}")

    @property
    def sd(self) -> float:
        return math.sqrt(self.var)


@dataclass(frozen=True)
class DecisionOutcome:
    verdict: Verdict
    p_efficacy: Probability
    p_futility: Probability


def posterior_update_precision(
    prior_mean: float, prior_precision: float, estimate: float, data_precision: float
) -> PosteriorSummary:
    """Precision-weighted conjugate update shared by every endpoint model."""
    if prior_precision < 0 or data_precision < 0:
        raise ValueError("precisions must be nonnegative")
    total = prior_precision + data_precision
    d = (prior_mean * prior_precision + estimate * data_precision) / total
    return PosteriorSummary(d=d, var=1.0 / total)


def _prior_mean_variance(prior) -> tuple[float, float]:
    if isinstance(prior, CollectivePrior):
        return prior.mean, prior.variance
    mean, variance = prior  # (mu0, s0_sq) pair for the no-borrowing prior
    if not (variance > 0):
        raise ValueError(f"prior variance must be positive, got {variance!r}")
    return float(mean), float(variance)


def posterior_update(
    prior: CollectivePrior | tuple[float, float],
    ybar_delta: float,
    n: int,
    R: float,
    sigma0_sq: float,
) -> PosteriorSummary:
    """Update the prior with the observed mean difference from an n-patient trial.

    ``prior`` is either a :class:`CollectivePrior` or a ``(mu0, s0_sq)`` pair.
    ``n = 0`` is the identity update.
    """
    mean, variance = _prior_mean_variance(prior)
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    if n == 0:
        return PosteriorSummary(d=mean, var=variance)
    check_probability(R, "R", open_interval=True)
    if not (sigma0_sq > 0):
        raise ValueError(f"sigma0_sq must be positive, got {sigma0_sq!r}")
    data_precision = n * R * (1.0 - R) / sigma0_sq
    return posterior_update_precision(mean, 1.0 / variance, ybar_delta, data_precision)


def prob_efficacy(post: PosteriorSummary) -> Probability:
    """Posterior probability that the treatment effect is greater than zero."""
    return std_normal_cdf(post.d / post.sd)


def prob_futility(post: PosteriorSummary, delta: float) -> Probability:
    """Posterior probability that the treatment effect is at most delta."""
    return std_normal_cdf((delta - post.d) / post.sd)


def decide(post: PosteriorSummary, delta: float, eta: Probability, zeta: Probability) -> DecisionOutcome:
    """Classify the posterior: efficacious, else futile, else inconclusive.

    Efficacy is checked first and both comparisons are inclusive, so boundary
    sample sizes from the design formulas stay decisive.
    """
    check_probability(eta, "eta", open_interval=True)
    check_probability(zeta, "zeta", open_interval=True)
    p_eff = prob_efficacy(post)
    p_fut = prob_futility(post, delta)
    if p_eff >= eta:
        verdict = Verdict.EFFICACIOUS
    elif p_fut >= zeta:
        verdict = Verdict.FUTILE
    else:
        verdict = Verdict.INCONCLUSIVE
    return DecisionOutcome(verdict=verdict, p_efficacy=p_eff, p_futility=p_fut)
