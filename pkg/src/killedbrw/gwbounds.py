"""Galton-Watson formulas for the regimes where the tilting parameter does not exist.

Keeping only the children displaced by at least ``v`` gives a Galton-Watson
process with Binomial(2, p_v) offspring, ``p_v = P(zeta >= v)``. Its survival
probability ``(2 p_v - 1) / p_v^2`` is a lower bound for the killed walk.
At ``v = zeta_plus`` the kept steps are exactly the top atom.
"""
from __future__ import annotations

from dataclasses import dataclass

from .critical import Regime, classify
from .errors import NotSupercritical, SubcriticalKept
from .step_dist import tilted_exceedance

__all__ = ["RegimeReport", "gw_survival", "supercritical_survival", "kept_steps_lower_bound", "regime_report"]


def gw_survival(p):
    """Survival probability of a Galton-Watson process with Binomial(2, p) offspring.

    Zero for ``p <= 1/2``, otherwise ``(2p - 1) / p^2``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    if p <= 0.5:
        return 0.0
    return (2.0 * p - 1.0) / (p * p)


def supercritical_survival(d):
    """Survival probability of the top-atom subtree, the limit of ``q_inf(0)`` as ``v`` rises to ``zeta_plus``.

    Raises
    ------
    NotSupercritical
        Unless the top atom carries more than half the mass.
    """
    regime = classify(d)
    if regime is not Regime.SUPERCRITICAL:
        raise NotSupercritical(f"top atom mass {d.p_top} is not above 1/2 ({regime.value})")
    return gw_survival(d.p_top)


def kept_steps_lower_bound(d, v):
    """``(2 p_v - 1) / p_v^2``, a lower bound on ``q_inf(0)`` at slope ``v``.

    Raises
    ------
    SubcriticalKept
        If ``p_v <= 1/2``, where the bound is the trivial 0.
    """
    p = tilted_exceedance(d, v)
    if p <= 0.5:
        raise SubcriticalKept(f"P(zeta >= {v}) = {p} <= 1/2")
    return gw_survival(p)


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    p_top: float
    lower: float | None = None
    upper: float | None = None
    gw_survival: float | None = None
    v: float | None = None

    def __post_init__(self):
        for name in ("p_top", "lower", "upper", "gw_survival"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name}={value} is not a probability")
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def to_json(self):
        bounds = None
        if self.lower is not None:
            bounds = {"lower": self.lower, "upper": self.upper}
        return {
            "regime": self.regime.value,
            "p_top": self.p_top,
            "bounds": bounds,
            "gw_survival": self.gw_survival,
            "v": self.v,
        }


def regime_report(d, v=None):
    """Regime of ``d`` plus whatever Galton-Watson bounds apply.

    The top-atom survival probability is reported for supercritical laws.
    With ``v`` given and ``P(zeta >= v) > 1/2`` the kept-steps lower bound
    is included. Both bounds are exact (0 or 1) outside
    ``(zeta_minus, zeta_plus]``; otherwise the upper bound is left open.
    """
    regime = classify(d)
    gw = supercritical_survival(d) if regime is Regime.SUPERCRITICAL else None
    lower = upper = None
    if v is not None:
        if v > d.zeta_plus:
            lower = upper = 0.0
        elif v <= d.zeta_minus:
            lower = upper = 1.0
        elif tilted_exceedance(d, v) > 0.5:
            lower = kept_steps_lower_bound(d, v)
        else:
            lower = 0.0
    return RegimeReport(regime, d.p_top, lower, upper, gw, v)
