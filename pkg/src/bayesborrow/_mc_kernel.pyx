# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernel, the default backend when built.

Mirrors ``_mc_fallback`` expression for expression: same SplitMix64 counter
streams, same inverse-CDF constants and Horner order, same accumulation
order, and the module is compiled with -ffp-contract=off, so the two
backends produce bit-identical results (tests enforce this).
"""

import numpy as np

from libc.math cimport erfc, exp, log, sqrt
from libc.stdint cimport uint64_t

BACKEND_NAME = "compiled"

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15u
cdef uint64_t MIX_M1 = 0xBF58476D1CE4E5B9u
cdef uint64_t MIX_M2 = 0x94D049BB133111EBu

cdef double SQRT1_2 = sqrt(0.5)
cdef double INV_SQRT_2PI = 1.0 / sqrt(2.0 * 3.141592653589793)
cdef double TWO_NEG_53 = 1.0 / 9007199254740992.0
cdef double P_LOW = 0.02425

cdef double A0 = -3.969683028665376e+01
cdef double A1 = 2.209460984245205e+02
cdef double A2 = -2.759285104469687e+02
cdef double A3 = 1.383577518672690e+02
cdef double A4 = -3.066479806614716e+01
cdef double A5 = 2.506628277459239e+00
cdef double B0 = -5.447609879822406e+01
cdef double B1 = 1.615858368580409e+02
cdef double B2 = -1.556989798598866e+02
cdef double B3 = 6.680131188771972e+01
cdef double B4 = -1.328068155288572e+01
cdef double C0 = -7.784894002430293e-03
cdef double C1 = -3.223964580411365e-01
cdef double C2 = -2.400758277161838e+00
cdef double C3 = -2.549732539343734e+00
cdef double C4 = 4.374664141464968e+00
cdef double C5 = 2.938163982698783e+00
cdef double D0 = 7.784695709041462e-03
cdef double D1 = 3.224671290700398e-01
cdef double D2 = 2.445134137142996e+00
cdef double D3 = 3.754408661907416e+00


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * MIX_M1
    z = (z ^ (z >> 27)) * MIX_M2
    return z ^ (z >> 31)


cdef inline double uniform_open(uint64_t raw) nogil:
    return (<double> (raw >> 11) + 0.5) * TWO_NEG_53


cdef inline double norm_cdf_c(double x) nogil:
    return 0.5 * erfc(-x * SQRT1_2)


cdef inline double tail_estimate(double q) nogil:
    cdef double num = ((((C0 * q + C1) * q + C2) * q + C3) * q + C4) * q + C5
    cdef double den = (((D0 * q + D1) * q + D2) * q + D3) * q + 1.0
    return num / den


cdef inline double norm_quantile_c(double p) nogil:
    cdef double q, r, x, num, den, pdf, err
    if p < P_LOW:
        q = sqrt(-2.0 * log(p))
        x = tail_estimate(q)
    elif p > 1.0 - P_LOW:
        q = sqrt(-2.0 * log(1.0 - p))
        x = -tail_estimate(q)
    else:
        q = p - 0.5
        r = q * q
        num = (((((A0 * r + A1) * r + A2) * r + A3) * r + A4) * r + A5) * q
        den = ((((B0 * r + B1) * r + B2) * r + B3) * r + B4) * r + 1.0
        x = num / den
    pdf = INV_SQRT_2PI * exp(-0.5 * x * x)
    if pdf == 0.0:
        return x
    err = 0.5 * erfc(-x * SQRT1_2) - p
    return x - err / pdf


cdef inline double one_ybar(
    uint64_t seed, uint64_t rep, long n_t, long n_c, double mu_delta, double sigma0
) nogil:
    cdef uint64_t key = mix64(seed + (rep + 1) * GAMMA)
    cdef double sum_t = 0.0
    cdef double sum_c = 0.0
    cdef double z
    cdef long j
    for j in range(n_t):
        z = norm_quantile_c(uniform_open(mix64(key + (<uint64_t> (j + 1)) * GAMMA)))
        sum_t += mu_delta + sigma0 * z
    for j in range(n_t, n_t + n_c):
        z = norm_quantile_c(uniform_open(mix64(key + (<uint64_t> (j + 1)) * GAMMA)))
        sum_c += sigma0 * z
    return sum_t / (<double> n_t) - sum_c / (<double> n_c)


def replicate_ybars(
    uint64_t seed, uint64_t rep_start, long count, long n_t, long n_c,
    double mu_delta, double sigma0,
):
    """Observed mean differences for replicates rep_start .. rep_start+count-1."""
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef long i
    with nogil:
        for i in range(count):
            view[i] = one_ybar(seed, rep_start + <uint64_t> i, n_t, n_c, mu_delta, sigma0)
    return out


def tally_replicates(
    uint64_t seed, uint64_t rep_start, long count, long n_t, long n_c,
    double mu_delta, double sigma0, double prior_mean, double prior_precision,
    double data_precision, double delta, double eta, double zeta,
):
    """Verdict counts (efficacious, futile, inconclusive) over a replicate range."""
    cdef double total = prior_precision + data_precision
    cdef double sigma = sqrt(1.0 / total)
    cdef double ybar, d, p_eff, p_fut
    cdef long n_eff = 0
    cdef long n_fut = 0
    cdef long i
    with nogil:
        for i in range(count):
            ybar = one_ybar(seed, rep_start + <uint64_t> i, n_t, n_c, mu_delta, sigma0)
            d = (prior_mean * prior_precision + ybar * data_precision) / total
            p_eff = norm_cdf_c(d / sigma)
            if p_eff >= eta:
                n_eff += 1
            else:
                p_fut = norm_cdf_c((delta - d) / sigma)
                if p_fut >= zeta:
                    n_fut += 1
    return n_eff, n_fut, count - n_eff - n_fut


def norm_quantile(p):
    """Vectorized inverse normal CDF (for parity tests and benchmarks)."""
    arr = np.ascontiguousarray(p, dtype=np.float64).reshape(-1)
    out = np.empty_like(arr)
    cdef double[::1] src = arr
    cdef double[::1] dst = out
    cdef long i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = norm_quantile_c(src[i])
    return out.reshape(np.shape(p))


def norm_cdf(x):
    """Vectorized standard normal CDF (for parity tests and benchmarks)."""
    arr = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    out = np.empty_like(arr)
    cdef double[::1] src = arr
    cdef double[::1] dst = out
    cdef long i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = norm_cdf_c(src[i])
    return out.reshape(np.shape(x))


def stream_raw(uint64_t key, uint64_t index):
    """index-th raw output of the SplitMix64 stream with initial state key."""
    return mix64(key + (index + 1) * GAMMA)
