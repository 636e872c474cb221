"""Standard-normal primitives and the Gamma-mixture borrowing hyperparameters.

Everything in this module is pure, stateless and safe to call from any thread.
The quantile uses a rational approximation refined by one Newton step on the
CDF; sample-size formulas square sums of quantiles, so quantile error is the
accuracy bottleneck of the whole package.  The same constants and expression
order are compiled into the extension kernel so the two paths agree bit for
bit (see ``_mc_kernel.pyx``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Annotation alias: a float constrained to [0, 1].
Probability = float

_SQRT1_2 = math.sqrt(0.5)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Acklam's inverse-normal rational fit (|relative error| < 1.15e-9 before the
# Newton refinement).  Do not reorder the Horner chains: the compiled kernel
# mirrors them verbatim.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def check_probability(value: float, name: str, *, open_interval: bool = False) -> float:
    """Validate a probability, returning it as a float.

    ``open_interval`` excludes the endpoints (needed wherever a normal
    quantile of the value is taken).
    """
    try:
        inside = 0.0 < value < 1.0 if open_interval else 0.0 <= value <= 1.0
    except TypeError:
        inside = False
    if not inside:
        bounds = "(0, 1)" if open_interval else "[0, 1]"
        raise ValueError(f"{name} must lie in {bounds}, got {value!r}")
    return float(value)


def std_normal_cdf(x: float) -> Probability:
    """Standard normal CDF, computed through the complementary error function."""
    if not math.isfinite(x):
        raise ValueError(f"std_normal_cdf requires a finite argument, got {x!r}")
    return 0.5 * math.erfc(-x * _SQRT1_2)


def _quantile_estimate(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                 / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))


def std_normal_quantile(p: Probability) -> float:
    """Inverse of :func:`std_normal_cdf`.

    Accurate to |cdf(quantile(p)) - p| <= 1e-12 for p in [1e-12, 1 - 1e-12].
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"std_normal_quantile requires 0 < p < 1, got {p!r}")
    x = _quantile_estimate(p)
    pdf = _INV_SQRT_2PI * math.exp(-0.5 * x * x)
    if pdf == 0.0:  # p within a few ulps of 0 or 1; the estimate is all we have
        return x
    err = 0.5 * math.erfc(-x * _SQRT1_2) - p
    return x - err / pdf


@dataclass(frozen=True)
class GammaMixtureHyperparams:
    """Hyperparameters of the two-component Gamma prior on the commensurability precision.

    The first component (``a01``, ``b01``) places its mass on small precisions
    and governs the discounting endpoint (weight 1); the second (``a02``,
    ``b02``) on large precisions, the borrowing endpoint (weight 0).  ``c0``
    is the concentration parameter of the legacy exponential synthesis rule
    and may be ``None`` when that rule is never used.

    Defaults are the values used for the bundled reference scenarios.
    """

    a01: float = 1.01
    b01: float = 1.01
    a02: float = 1.0e6
    b02: float = 1.0
    c0: float | None = 0.05

    def __post_init__(self) -> None:
        for name in ("a01", "b01", "a02", "b02"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        if self.a01 <= 1.0 or self.a02 <= 1.0:
            raise ValueError("shape parameters a01 and a02 must exceed 1")
        if self.b01 <= 0.0 or self.b02 <= 0.0:
            raise ValueError("rate parameters b01 and b02 must be positive")
        # Everything downstream (monotone aggregation, weight linearization,
        # sample-size monotonicity) relies on this ordering.
        if self.discount_scale <= self.borrow_scale:
            raise ValueError(
                "discounting endpoint b01/(a01-1) must strictly exceed the "
                f"borrowing endpoint b02/(a02-1); got {self.discount_scale!r} "
                f"<= {self.borrow_scale!r}"
            )
        if self.c0 is not None and not (isinstance(self.c0, (int, float)) and self.c0 > 0):
            raise ValueError(f"c0 must be positive when given, got {self.c0!r}")

    @property
    def discount_scale(self) -> float:
        """Between-trial variance added at weight 1 (full discounting)."""
        return self.b01 / (self.a01 - 1.0)

    @property
    def borrow_scale(self) -> float:
        """Between-trial variance added at weight 0 (full borrowing)."""
        return self.b02 / (self.a02 - 1.0)


def inverse_gamma_mixture_mean(w: float, hyper: GammaMixtureHyperparams) -> float:
    """Mean inverse precision of the mixture, by two-moment matching.

    Affine in ``w``: ``w * b01/(a01-1) + (1-w) * b02/(a02-1)``, strictly
    increasing thanks to the endpoint ordering enforced at construction.
    """
    if not (0.0 <= w <= 1.0):
        raise ValueError(f"weight must lie in [0, 1], got {w!r}")
    return w * hyper.discount_scale + (1.0 - w) * hyper.borrow_scale
