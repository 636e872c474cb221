"""Seeded Monte Carlo evaluation of a design: replicate, analyze, tally.

Replicate streams are counter-based (SplitMix64, Steele/Lea/Flood 2014): the
stream for replicate ``r`` is keyed by ``mix(seed, r)``, so replicates are
independent of execution order and of the worker count, and verdict tallies
are plain integer sums.  Identical (seed, config) gives identical results on
either kernel backend.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._backend import kernel
from .borrowing import CollectivePrior
from .design import DesignParams
from .inference import DecisionOutcome, decide, posterior_update

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1
_CHUNK = 8192


def splitmix64_mix(z: int) -> int:
    """SplitMix64 finalizer (Stafford mix 13); the scalar reference for both kernels."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_value(key: int, index: int) -> int:
    """index-th output of the SplitMix64 stream with initial state ``key``."""
    return splitmix64_mix((key + (index + 1) * GOLDEN_GAMMA) & _MASK64)


def replicate_key(seed: int, rep_index: int) -> int:
    """Stream key owned by one replicate: mix(seed, rep_index)."""
    return stream_value(seed, rep_index)


def uniform_from_raw(raw: int) -> float:
    """Map a 64-bit draw to the open interval (0, 1) with a half-ulp offset."""
    return ((raw >> 11) + 0.5) * 2.0 ** -53


@dataclass(frozen=True)
class SimulationConfig:
    """Everything one evaluation run needs; immutable so runs are reproducible."""

    design: DesignParams
    prior: CollectivePrior
    n: int
    true_mu_delta: float
    replicates: int
    seed: int

    def __post_init__(self) -> None:
        if self.design.sigma0_sq is None:
            raise ValueError("simulation requires sigma0_sq in the design")
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        n_t = self.n * self.design.R
        if abs(n_t - round(n_t)) > 1e-9 or round(n_t) < 1 or self.n - round(n_t) < 1:
            raise ValueError(
                f"n = {self.n} is not compatible with allocation R = {self.design.R}"
            )
        if not isinstance(self.replicates, int) or self.replicates < 1:
            raise ValueError(f"replicates must be a positive integer, got {self.replicates!r}")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 1 << 64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not math.isfinite(self.true_mu_delta):
            raise ValueError(f"true_mu_delta must be finite, got {self.true_mu_delta!r}")

    @property
    def arm_sizes(self) -> tuple[int, int]:
        n_t = int(round(self.n * self.design.R))
        return n_t, self.n - n_t


@dataclass(frozen=True)
class SimulationResult:
    pct_efficacious: float
    pct_futile: float
    pct_inconclusive: float
    replicates: int
    seed: int
    mc_stderr: float


def replicate_ybar(rep_index: int, config: SimulationConfig) -> float:
    """Observed mean difference of one replicate's simulated data."""
    n_t, n_c = config.arm_sizes
    values = kernel.replicate_ybars(
        config.seed, rep_index, 1, n_t, n_c,
        config.true_mu_delta, math.sqrt(config.design.sigma0_sq),
    )
    return float(values[0])


def run_replicate(
    rep_index: int, config: SimulationConfig, ybar_delta: float | None = None
) -> DecisionOutcome:
    """Simulate (or inject via ``ybar_delta``) one trial and classify it.

    The injection hook lets deterministic tests traverse the full analysis
    path without stochastic data.
    """
    if ybar_delta is None:
        ybar_delta = replicate_ybar(rep_index, config)
    post = posterior_update(
        config.prior, ybar_delta, config.n, config.design.R, config.design.sigma0_sq
    )
    return decide(post, config.design.delta, config.design.eta, config.design.zeta)


def run_simulation(config: SimulationConfig, workers: int = 1) -> SimulationResult:
    """Tally verdicts over all replicates.

    Chunk boundaries are fixed by replicate index, and each chunk's tally is an
    integer triple, so the result is identical for any ``workers`` value.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers!r}")
    n_t, n_c = config.arm_sizes
    design = config.design
    sigma0 = math.sqrt(design.sigma0_sq)
    data_precision = config.n * design.R * (1.0 - design.R) / design.sigma0_sq

    spans = [
        (start, min(_CHUNK, config.replicates - start))
        for start in range(0, config.replicates, _CHUNK)
    ]

    def tally(span: tuple[int, int]) -> tuple[int, int, int]:
        start, count = span
        return kernel.tally_replicates(
            config.seed, start, count, n_t, n_c, config.true_mu_delta, sigma0,
            config.prior.mean, config.prior.precision, data_precision,
            design.delta, design.eta, design.zeta,
        )

    if workers == 1:
        tallies = [tally(span) for span in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(tally, spans))

    n_eff = sum(t[0] for t in tallies)
    n_fut = sum(t[1] for t in tallies)
    n_inc = config.replicates - n_eff - n_fut
    p_eff = n_eff / config.replicates
    return SimulationResult(
        pct_efficacious=100.0 * n_eff / config.replicates,
        pct_futile=100.0 * n_fut / config.replicates,
        pct_inconclusive=100.0 * n_inc / config.replicates,
        replicates=config.replicates,
        seed=config.seed,
        mc_stderr=math.sqrt(p_eff * (1.0 - p_eff) / config.replicates),
    )
