"""Critical speed and tilting parameter of the binary branching random walk."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegenerateStep, NotSubcritical
from .step_dist import log_laplace, log_laplace_d1, log_laplace_d2

__all__ = [
    "Regime",
    "CriticalParams",
    "classify",
    "solve_t_star",
    "critical_params",
    "tangency_residual",
    "theta",
    "theta_ratio",
    "v_star_infimum",
]

LOG2 = math.log(2.0)
_CRITICAL_TOL = 1e-12


class Regime(enum.Enum):
    """Criticality of the Galton-Watson process of maximal steps."""

    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class CriticalParams:
    """Critical pair of a step law.

    ``t_star`` and ``lambda2_star`` are ``None`` outside the subcritical
    regime, where ``v_star`` equals the top of the support.
    """

    regime: Regime
    v_star: float
    t_star: float | None = None
    lambda2_star: float | None = None
    residual: float | None = None

    @property
    def asymptotic_constant(self):
        """``lambda2_star * t_star``, the constant under the square root of the asymptotics."""
        return self.lambda2_star * self.t_star

    def to_json(self):
        return {
            "t_star": self.t_star,
            "v_star": self.v_star,
            "lambda2_star": self.lambda2_star,
            "regime": self.regime.value,
            "residual": self.residual,
        }


def classify(d):
    """Regime from the mass of the top atom compared with one half."""
    gap = d.p_top - 0.5
    if abs(gap) <= _CRITICAL_TOL:
        return Regime.CRITICAL
    return Regime.SUBCRITICAL if gap < 0 else Regime.SUPERCRITICAL


def tangency_residual(d, t):
    """``Lambda(t) - t Lambda'(t) + log 2``; vanishes exactly at ``t_star``."""
    return log_laplace(d, t) - t * log_laplace_d1(d, t) + LOG2


def solve_t_star(d, t_init=1.0):
    """Solve the tangency equation by bracketing, bisection and a Newton polish.

    The residual is nonincreasing in ``t`` (its derivative is
    ``-t Lambda''(t)``), positive at 0 and tends to ``log(2 p_top)``, so a
    bracket found by doubling from ``t_init`` contains the unique root.
    """
    if d.is_degenerate:
        raise DegenerateStep("point-mass step law has no tilting parameter")
    regime = classify(d)
    if regime is not Regime.SUBCRITICAL:
        raise NotSubcritical(f"top atom carries mass {d.p_top} >= 1/2 ({regime.value})")

    f = lambda t: tangency_residual(d, t)
    lo, hi = 0.0, float(t_init)
    while f(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise NotSubcritical("failed to bracket the tangency root")
    while hi - lo > 1e-6 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid

    t = 0.5 * (lo + hi)
    for _ in range(50):
        r = f(t)
        if abs(r) <= 1e-14:
            break
        slope = -t * log_laplace_d2(d, t)
        if slope == 0.0:
            break
        t_new = t - r / slope
        if not lo <= t_new <= hi:
            break
        if abs(t_new - t) <= 1e-16 * t:
            t = t_new
            break
        t = t_new
    v_star = log_laplace_d1(d, t)
    return CriticalParams(
        regime=Regime.SUBCRITICAL,
        v_star=v_star,
        t_star=t,
        lambda2_star=log_laplace_d2(d, t),
        residual=abs(f(t)),
    )


def critical_params(d):
    """Like :func:`solve_t_star` but total: non-subcritical laws get ``v_star = zeta_plus``."""
    regime = classify(d)
    if regime is Regime.SUBCRITICAL and not d.is_degenerate:
        return solve_t_star(d)
    return CriticalParams(regime=regime, v_star=d.zeta_plus)


def theta(d, t):
    """``log(2 E exp(t zeta))``."""
    return LOG2 + log_laplace(d, t)


def theta_ratio(d, t):
    """``theta(t) / t`` written as ``zeta_plus + log(2 E e^{t(zeta - zeta_plus)}) / t`` (no cancellation at large t)."""
    t = np.asarray(t, dtype=float)
    zp = d.zeta_plus
    inner = np.sum(d.probs * np.exp(np.multiply.outer(t, d.values - zp)), axis=-1)
    out = zp + (LOG2 + np.log(inner)) / t
    return float(out) if out.ndim == 0 else out


def v_star_infimum(d, t_min=1e-4, t_max=1e10, points=400):
    """``inf_{t>0} theta(t)/t`` by a log-spaced scan refined with golden-section search.

    When the infimum is not attained (critical and supercritical laws) the
    scan ends at ``t_max`` and the returned value exceeds ``zeta_plus`` by at
    most ``log(2)/t_max``.
    """
    grid = np.geomspace(t_min, t_max, points)
    vals = theta_ratio(d, grid)
    k = int(np.argmin(vals))
    if k == 0 or k == points - 1 or not (vals[k] < vals[k - 1] and vals[k] < vals[k + 1]):
        # not attained, or flat to machine precision
        return float(vals[k])
    logs = np.log(grid[k - 1 : k + 2])
    res = minimize_scalar(
        lambda s: theta_ratio(d, math.exp(s)),
        bracket=tuple(logs),
        method="golden",
        tol=1e-10,
    )
    return float(min(res.fun, vals[k]))
