"""Pure-Python Monte Carlo kernel (numpy + libm), the fallback backend.

Mirrors ``_mc_kernel.pyx`` expression for expression.  The three
transcendentals that differ between numpy's SIMD routines and the C library
(log, exp, erfc) are routed through :mod:`math` elementwise, and row sums use
``cumsum`` (strictly sequential), so results are bit-identical to the
compiled kernel.  That costs speed; this backend exists for installs without
a compiler and as the reference in backend-parity tests.

Draw protocol (shared by both backends):

* replicate ``r`` owns the SplitMix64 stream keyed ``mix(seed + (r+1)*GAMMA)``;
* draw ``j`` of the replicate is ``mix(key + (j+1)*GAMMA)``;
* a uniform in (0, 1) is ``((raw >> 11) + 0.5) * 2**-53``;
* normals come from the audited inverse-CDF (same constants as ``stats``);
* treatment outcomes consume draws ``0 .. n_t-1``, control ``n_t .. n_t+n_c-1``.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "python"

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_M1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_M2 = np.uint64(0x94D049BB133111EB)
_SQRT1_2 = math.sqrt(0.5)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_TWO_NEG_53 = 2.0 ** -53
_P_LOW = 0.02425

_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)

_vec_log = np.frompyfunc(math.log, 1, 1)
_vec_exp = np.frompyfunc(math.exp, 1, 1)
_vec_erfc = np.frompyfunc(math.erfc, 1, 1)


def _libm_log(a: np.ndarray) -> np.ndarray:
    return _vec_log(a).astype(np.float64)


def _libm_exp(a: np.ndarray) -> np.ndarray:
    return _vec_exp(a).astype(np.float64)


def _libm_erfc(a: np.ndarray) -> np.ndarray:
    return _vec_erfc(a).astype(np.float64)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX_M1
    z = (z ^ (z >> np.uint64(27))) * _MIX_M2
    return z ^ (z >> np.uint64(31))


def norm_cdf(x: np.ndarray) -> np.ndarray:
    return 0.5 * _libm_erfc(-x * _SQRT1_2)


def norm_quantile(p: np.ndarray) -> np.ndarray:
    """Vectorized inverse normal CDF; identical branches and Horner order to stats."""
    p = np.asarray(p, dtype=np.float64)
    x = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)
    if lo.any():
        q = np.sqrt(-2.0 * _libm_log(p[lo]))
        x[lo] = _tail(q)
    if hi.any():
        q = np.sqrt(-2.0 * _libm_log(1.0 - p[hi]))
        x[hi] = -_tail(q)
    if mid.any():
        q = p[mid] - 0.5
        r = q * q
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        x[mid] = num / den
    pdf = _INV_SQRT_2PI * _libm_exp(-0.5 * x * x)
    err = 0.5 * _libm_erfc(-x * _SQRT1_2) - p
    with np.errstate(divide="ignore", invalid="ignore"):
        refined = x - err / pdf
    return np.where(pdf == 0.0, x, refined)


def _tail(q: np.ndarray) -> np.ndarray:
    num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
    den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
    return num / den


def _raw_draws(seed: int, rep_start: int, count: int, draws: int) -> np.ndarray:
    reps = np.arange(rep_start, rep_start + count, dtype=np.uint64)
    keys = _mix(np.uint64(seed % (1 << 64)) + (reps + np.uint64(1)) * _GAMMA)
    offsets = (np.arange(draws, dtype=np.uint64) + np.uint64(1)) * _GAMMA
    return _mix(keys[:, None] + offsets[None, :])


def replicate_ybars(
    seed: int, rep_start: int, count: int, n_t: int, n_c: int, mu_delta: float, sigma0: float
) -> np.ndarray:
    """Observed mean differences for replicates rep_start .. rep_start+count-1."""
    raw = _raw_draws(seed, rep_start, count, n_t + n_c)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_NEG_53
    z = norm_quantile(u.reshape(-1)).reshape(u.shape)
    treat = mu_delta + sigma0 * z[:, :n_t]
    control = sigma0 * z[:, n_t:]
    # cumsum is sequential left-to-right, matching the compiled kernel's
    # accumulation order (np.sum would pairwise-sum and round differently)
    sum_t = np.cumsum(treat, axis=1)[:, -1]
    sum_c = np.cumsum(control, axis=1)[:, -1]
    return sum_t / n_t - sum_c / n_c


def tally_replicates(
    seed: int,
    rep_start: int,
    count: int,
    n_t: int,
    n_c: int,
    mu_delta: float,
    sigma0: float,
    prior_mean: float,
    prior_precision: float,
    data_precision: float,
    delta: float,
    eta: float,
    zeta: float,
) -> tuple[int, int, int]:
    """Verdict counts (efficacious, futile, inconclusive) over a replicate range."""
    ybar = replicate_ybars(seed, rep_start, count, n_t, n_c, mu_delta, sigma0)
    total = prior_precision + data_precision
    sigma = math.sqrt(1.0 / total)
    d = (prior_mean * prior_precision + ybar * data_precision) / total
    p_eff = norm_cdf(d / sigma)
    p_fut = norm_cdf((delta - d) / sigma)
    eff = p_eff >= eta
    fut = ~eff & (p_fut >= zeta)
    n_eff = int(np.count_nonzero(eff))
    n_fut = int(np.count_nonzero(fut))
    return n_eff, n_fut, count - n_eff - n_fut
