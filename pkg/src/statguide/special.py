"""Special functions backing the p-values: regularized incomplete beta and
the Student-t / F cumulative distribution functions built on it."""

from __future__ import annotations

import math

from .errors import DataError

_MAX_ITER = 500
_EPS = 1e-16
_TINY = 1e-300


def reg_incomplete_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Continued-fraction evaluation (modified Lentz), switched through the
    symmetry I_x(a,b) = 1 - I_{1-x}(b,a) so the fraction always converges
    fast. Absolute error is well under 1e-10 across the tested domain.
    """
    if not 0.0 <= x <= 1.0:
        raise DataError(f"x must be in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise DataError(f"shape parameters must be positive, got a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_contfrac(a, b, x) / a
    return 1.0 - front * _beta_contfrac(b, a, 1.0 - x) / b


def _beta_contfrac(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, by the modified Lentz method."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        # even step
        num = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + num * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + num / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + num * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + num / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise DataError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def t_cdf(x: float, df: float) -> float:
    """Student-t CDF with ``df`` degrees of freedom."""
    if df <= 0:
        raise DataError(f"degrees of freedom must be positive, got {df}")
    if math.isnan(x):
        raise DataError("t_cdf of nan")
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x == 0.0:
        return 0.5
    tail = 0.5 * reg_incomplete_beta(df / (df + x * x), df / 2.0, 0.5)
    return tail if x < 0 else 1.0 - tail


def t_sf(x: float, df: float) -> float:
    """Student-t survival function 1 - t_cdf(x, df), computed without the
    cancellation that 1 - cdf suffers for large x."""
    if df <= 0:
        raise DataError(f"degrees of freedom must be positive, got {df}")
    if math.isnan(x):
        raise DataError("t_sf of nan")
    if math.isinf(x):
        return 0.0 if x > 0 else 1.0
    if x == 0.0:
        return 0.5
    tail = 0.5 * reg_incomplete_beta(df / (df + x * x), df / 2.0, 0.5)
    return tail if x > 0 else 1.0 - tail


def f_cdf(x: float, d1: float, d2: float) -> float:
    """F-distribution CDF with (d1, d2) degrees of freedom; x must be >= 0."""
    if d1 <= 0 or d2 <= 0:
        raise DataError(f"degrees of freedom must be positive, got ({d1}, {d2})")
    if x < 0:
        raise DataError(f"f_cdf requires x >= 0, got {x}")
    if math.isinf(x):
        return 1.0
    if x == 0.0:
        return 0.0
    return reg_incomplete_beta(d1 * x / (d1 * x + d2), d1 / 2.0, d2 / 2.0)


def f_sf(x: float, d1: float, d2: float) -> float:
    """F-distribution survival function 1 - f_cdf(x, d1, d2), cancellation-free."""
    if d1 <= 0 or d2 <= 0:
        raise DataError(f"degrees of freedom must be positive, got ({d1}, {d2})")
    if x < 0:
        raise DataError(f"f_sf requires x >= 0, got {x}")
    if math.isinf(x):
        return 0.0
    if x == 0.0:
        return 1.0
    return reg_incomplete_beta(d2 / (d2 + d1 * x), d2 / 2.0, d1 / 2.0)


def t_quantile(p: float, df: float) -> float:
    """Inverse of t_cdf by bisection; t_cdf is strictly monotone in x."""
    if not 0.0 < p < 1.0:
        raise DataError(f"quantile level must be in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    # bracket the root, then bisect to ~1e-13 relative width
    hi = 1.0
    while t_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e300:
            raise DataError(f"t quantile bracket failed for p={p}, df={df}")
    lo = -hi
    while t_cdf(lo, df) > p:
        lo *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if t_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)
