"""Self-contained statistical kernels: Pearson correlation, regularized
incomplete beta, beta quantiles, and Student-t tail probabilities.

The beta-function kernels are implemented from scratch (continued
fraction plus Newton inversion) so results are deterministic and
auditable; no external numerics library is involved.  Accuracy targets
are 1e-10 absolute for the CDF and 1e-8 for the quantile, two orders
tighter than anything downstream consumes.

Scalar cores are numba-compiled when available (see ``_accel``).
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import njit

__all__ = [
    "ConvergenceError",
    "pearson",
    "regularized_incomplete_beta",
    "beta_quantile",
    "student_t_two_sided_p",
]

# Continued-fraction convergence threshold and iteration caps.
_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 500
_QUANTILE_MAX_ITER = 200
_QUANTILE_TOL = 1e-10  # in-loop target on |I_x(a,b) - q|
_QUANTILE_ACCEPT = 1e-8  # contract: worst acceptable residual


class ConvergenceError(ArithmeticError):
    """An iterative kernel failed to reach its accuracy target."""


def pearson(u, v) -> float | None:
    """Sample Pearson correlation of two equal-length vectors.

    Returns None when either vector has zero variance (the coefficient
    is undefined there; callers treat it as "no measurable dependence").
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or v.ndim != 1:
        raise ValueError("pearson expects 1-d vectors")
    if u.shape[0] != v.shape[0]:
        raise ValueError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    if u.shape[0] < 2:
        raise ValueError("pearson needs at least 2 observations")
    du = u - u.mean()
    dv = v - v.mean()
    su = math.sqrt(float(du @ du))
    sv = math.sqrt(float(dv @ dv))
    if su == 0.0 or sv == 0.0:
        return None
    r = float(du @ dv) / (su * sv)
    return max(-1.0, min(1.0, r))


@njit
def _lbeta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


@njit
def _betacf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


@njit
def _betainc(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b) for 0 <= x <= 1, a, b > 0."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lfront = a * math.log(x) + b * math.log1p(-x) - _lbeta(a, b)
    front = math.exp(lfront)
    # symmetry switch keeps the continued fraction in its fast region
    if x < (a + 1.0) / (a + b + 2.0):
        r = front * _betacf(x, a, b) / a
    else:
        r = 1.0 - front * _betacf(1.0 - x, b, a) / b
    if r < 0.0:
        return 0.0
    if r > 1.0:
        return 1.0
    return r


@njit
def _beta_quantile(q: float, a: float, b: float) -> float:
    """Invert I_x(a, b) = q by bracketed Newton; NaN when past the cap.

    When the quantile sits so close to 0 or 1 that no double between the
    bracket endpoints remains, the correctly rounded endpoint is the
    best representable answer and is returned even though the residual
    on the CDF scale may exceed the usual target (the CDF is effectively
    vertical there).
    """
    lo = 0.0
    hi = 1.0
    x = a / (a + b)
    lnb = _lbeta(a, b)
    f = _betainc(x, a, b) - q
    for _ in range(_QUANTILE_MAX_ITER):
        if abs(f) <= _QUANTILE_TOL:
            return x
        if f > 0.0:
            hi = x
        else:
            lo = x
        # bracket collapsed to ulp scale: x is correctly rounded
        if hi - lo <= 1e-15 * max(hi, 1e-300):
            return 0.5 * (lo + hi)
        # Newton step off the density; bisect when it escapes the bracket
        # or the density underflows.
        stepped = False
        lpdf = (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - lnb
        if lpdf > -700.0:
            pdf = math.exp(lpdf)
            if pdf > 0.0:
                xn = x - f / pdf
                if lo < xn < hi:
                    x = xn
                    stepped = True
        if not stepped:
            x = 0.5 * (lo + hi)
        f = _betainc(x, a, b) - q
    if abs(f) <= _QUANTILE_ACCEPT:
        return x
    return math.nan


@njit
def _t_two_sided(t_stat: float, dof: int) -> float:
    """Two-sided tail 2*P(T >= |t|) via the incomplete-beta identity."""
    if t_stat == 0.0:
        return 1.0
    if math.isinf(t_stat):
        return 0.0
    x = dof / (dof + t_stat * t_stat)
    return _betainc(x, 0.5 * dof, 0.5)


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b), the regularized incomplete beta function."""
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must be in [0, 1], got {x}")
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"shape a must be finite and > 0, got {a}")
    if not (b > 0.0 and math.isfinite(b)):
        raise ValueError(f"shape b must be finite and > 0, got {b}")
    return float(_betainc(float(x), float(a), float(b)))


def beta_quantile(q: float, a: float, b: float) -> float:
    """x such that I_x(a, b) = q, accurate to 1e-8 on the CDF scale."""
    if not (0.0 < q < 1.0):
        raise ValueError(f"q must be in (0, 1), got {q}")
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"shape a must be finite and > 0, got {a}")
    if not (b > 0.0 and math.isfinite(b)):
        raise ValueError(f"shape b must be finite and > 0, got {b}")
    x = float(_beta_quantile(float(q), float(a), float(b)))
    if math.isnan(x):
        raise ConvergenceError(
            f"beta_quantile(q={q}, a={a}, b={b}) did not converge "
            f"within {_QUANTILE_MAX_ITER} iterations"
        )
    return x


def student_t_two_sided_p(t_stat: float, dof: int) -> float:
    """Two-sided p-value 2*P(T >= |t|) for a t-distribution with ``dof``
    degrees of freedom.  Infinite ``t_stat`` maps to exactly 0."""
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    t_stat = float(t_stat)
    if math.isnan(t_stat):
        raise ValueError("t_stat is NaN")
    return float(_t_two_sided(t_stat, int(dof)))
