"""Super- and sub-solutions of the survival equation built from the linear wave.

Both fronts are a damped sinusoid ``A e^{alpha x} sin(beta x)`` cut at the
top of its first arch and continued by a constant plateau:

* super-solution (``a = -log 2``): ``A d(x + Delta)`` on ``[0, L - 2 Delta]``,
  then 1, with ``A`` chosen so the two pieces meet continuously;
* sub-solution (``a = -log 2 + eps^2``): ``A d(x)`` on ``[0, L]``, then
  ``h = gamma (2 - gamma)`` with ``gamma = e^{-a}``.

``T(c_+) <= c_+`` and ``T(c_-) >= c_-`` then hold for small ``eps``, and
``log c(1) = -pi sqrt(Lambda'' t* / (2 eps)) + O(log eps)`` for both.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .critical import LOG2, Regime
from .errors import EpsTooLarge, NotSubcritical, PropertyViolation
from .fixedpoint import ConvolutionOperator, GridFunction, RightMode, default_x_max, snap_to_lattice
from .linwave import LinearWave, d_profile, d_profile_prime, linear_wave, support_radius

__all__ = [
    "Kind",
    "FrontProfile",
    "CheckReport",
    "build_super",
    "build_sub",
    "check_super_inequality",
    "check_sub_inequality",
    "support_radius",
    "snap_eps",
    "leading_log",
    "grid_tolerance",
]

# sampling density for the property checks, per unit length
_SAMPLES = 2000
_SLACK = 1e-12


class Kind(enum.Enum):
    SUPER = "super"
    SUB = "sub"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FrontProfile:
    """A comparison front, exact as a function and rendered on a grid.

    ``shift`` is ``Delta`` for the super-solution and 0 for the
    sub-solution, so that the oscillatory piece is ``A d(x + shift)`` on
    ``[0, cutoff]`` in both cases.
    """

    kind: Kind
    wave: LinearWave
    A_eps: float
    log_A: float
    delta: float
    cutoff: float
    plateau: float
    gamma_eps: float | None
    h_eps: float | None
    step: float
    x_max: float

    @property
    def v(self):
        return self.wave.v

    @property
    def eps(self):
        return self.wave.eps

    @property
    def shift(self):
        return self.delta if self.kind is Kind.SUPER else 0.0

    @property
    def right_mode(self):
        return RightMode.CLAMP_ONE if self.kind is Kind.SUPER else RightMode.CLAMP_LAST

    def oscillatory(self, x):
        """``A d(x + shift)`` without the cut-offs."""
        return self.A_eps * d_profile(self.wave.alpha, self.wave.beta, np.asarray(x, dtype=float) + self.shift)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > self.cutoff, self.plateau, self.oscillatory(x))
        out = np.where(x < 0, 0.0, out)
        return float(out) if out.ndim == 0 else out

    @property
    def nodes(self):
        n = int(math.ceil(self.x_max / self.step - 1e-9)) + 1
        return self.step * np.arange(n)

    def node_values(self):
        """Exact profile values at the grid nodes, uncertified."""
        return self(self.nodes)

    @cached_property
    def grid(self):
        """:class:`GridFunction` rendering; right mode matches the plateau exactly."""
        return GridFunction(self.step, self.node_values(), self.right_mode)

    def log_c1(self):
        """``log c(1)`` computed from ``log A`` (no underflow for small ``eps``)."""
        if 1.0 > self.cutoff:
            return math.log(self.plateau)
        y = 1.0 + self.shift
        return self.log_A + self.wave.alpha * y + math.log(math.sin(self.wave.beta * y))

    def to_json(self):
        return {
            "kind": self.kind.value,
            "eps": self.eps,
            "v": self.v,
            "A_eps": self.A_eps,
            "delta": self.delta,
            "cutoff": self.cutoff,
            "plateau": self.plateau,
            "gamma_eps": self.gamma_eps,
            "h_eps": self.h_eps,
            "log_c1": self.log_c1(),
            **self.wave.to_json(),
        }


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    max_violation: float
    tolerance: float
    argmax: float = math.nan

    def to_json(self):
        return {"pass": self.passed, "max_violation": self.max_violation, "tolerance": self.tolerance}


def leading_log(crit, eps):
    """``-pi sqrt(Lambda''(t*) t* / (2 eps))``."""
    return -math.pi * math.sqrt(crit.asymptotic_constant / (2.0 * eps))


def snap_eps(crit, d, eps, step):
    """Distance to ``v*`` of the lattice speed nearest to ``v* - eps``."""
    return crit.v_star - snap_to_lattice(d, crit.v_star - eps, step)


def _sample(lo, hi):
    n = max(int(_SAMPLES * (hi - lo)), 16)
    return np.linspace(lo, hi, n + 1)


def _require(ok, label, message):
    if not ok:
        raise PropertyViolation(label, message)


def _prepare(crit, d, eps, a_eps, step):
    if crit.regime is not Regime.SUBCRITICAL:
        raise NotSubcritical("fronts need a subcritical law")
    wave = linear_wave(crit, d, eps, a_eps)
    delta = support_radius(d, wave.v)
    if wave.L <= 2.0 * delta + step:
        raise EpsTooLarge(f"L(eps)={wave.L:.4g} <= 2 Delta + step = {2 * delta + step:.4g} at eps={eps:g}")
    return wave, delta


def build_super(crit, d, eps, step=1e-3, x_max=None):
    """Super-solution ``c_+`` at ``v = v* - eps``.

    Parameters
    ----------
    crit : CriticalParams
    d : StepDistribution
    eps : float
        Distance below the critical speed. For exact lattice checks pass a
        value from :func:`snap_eps`.
    step : float
        Grid step of the rendering.
    x_max : float, optional
        Right end of the rendering; defaults to ``L + 8 Delta``.

    Raises
    ------
    EpsTooLarge
        If ``L(eps) <= 2 Delta + step``.
    PropertyViolation
        If one of the four defining properties fails on the sampled checks.
    """
    wave, delta = _prepare(crit, d, eps, -LOG2, step)
    alpha, beta, L = wave.alpha, wave.beta, wave.L
    y = L - delta
    s = math.sin(beta * y)
    if s <= 0.0:
        raise EpsTooLarge(f"sin(beta (L - Delta)) = {s:.3g} is not positive")
    log_A = -alpha * y - math.log(s)
    p = FrontProfile(
        kind=Kind.SUPER,
        wave=wave,
        A_eps=math.exp(log_A),
        log_A=log_A,
        delta=delta,
        cutoff=L - 2.0 * delta,
        plateau=1.0,
        gamma_eps=None,
        h_eps=None,
        step=float(step),
        x_max=float(x_max if x_max is not None else default_x_max(d, wave.v)),
    )
    C = p.cutoff
    c = p.oscillatory
    _require(np.all(c(_sample(-delta, 0.0)) >= -_SLACK), "i", "c < 0 somewhere on [-Delta, 0]")
    seg = c(_sample(0.0, C))
    _require(seg.min() >= -_SLACK and seg.max() <= 1.0 + _SLACK, "ii", "c leaves [0, 1] on [0, C]")
    _require(np.all(c(_sample(C, C + delta)) >= 1.0 - _SLACK), "iii", "c < 1 somewhere on [C, C + Delta]")
    _require(np.all(np.diff(seg) >= -_SLACK), "iv", "c decreases on [0, C]")
    return p


def build_sub(crit, d, eps, step=1e-3, x_max=None):
    """Sub-solution ``c_-`` at ``v = v* - eps`` with ``a = -log 2 + eps^2``.

    Same parameters and errors as :func:`build_super`.
    """
    a = -LOG2 + eps * eps
    wave, delta = _prepare(crit, d, eps, a, step)
    alpha, beta, L = wave.alpha, wave.beta, wave.L
    gamma = math.exp(-a)
    h = gamma * (2.0 - gamma)
    s = math.sin(beta * L)
    if s <= 0.0:
        raise EpsTooLarge(f"sin(beta L) = {s:.3g} is not positive")
    log_A = math.log(h) - alpha * L - math.log(s)
    p = FrontProfile(
        kind=Kind.SUB,
        wave=wave,
        A_eps=math.exp(log_A),
        log_A=log_A,
        delta=delta,
        cutoff=L,
        plateau=h,
        gamma_eps=gamma,
        h_eps=h,
        step=float(step),
        x_max=float(x_max if x_max is not None else default_x_max(d, crit.v_star - eps)),
    )
    c = p.oscillatory
    _require(np.all(c(_sample(-delta, 0.0)) <= _SLACK), "i", "c > 0 somewhere on [-Delta, 0]")
    seg = c(_sample(0.0, L))
    _require(seg.min() >= -_SLACK and seg.max() <= h + _SLACK, "ii", "c leaves [0, h] on [0, L]")
    _require(np.all(c(_sample(L, L + delta)) <= h + _SLACK), "iii", "c > h somewhere on [L, L + Delta]")
    _require(np.all(np.diff(seg) >= -_SLACK), "iv", "c decreases on [0, L]")
    return p


def grid_tolerance(p):
    """``10 step max slope``, the interpolation allowance of the rendering.

    The slope is that of the oscillatory piece on ``[0, cutoff]``, from the
    exact derivative; a jump at the cutoff (only possible in a corrupted
    profile) does not widen the tolerance.
    """
    x = np.append(p.nodes[p.nodes <= p.cutoff], p.cutoff)
    slope = p.A_eps * float(np.max(d_profile_prime(p.wave.alpha, p.wave.beta, x + p.shift)))
    return 10.0 * p.step * max(slope, 0.0)


def _check(p, d, operator, sign):
    vals = p.node_values()
    op = operator
    if op is None or op.n != vals.size or op.step != p.step or op.right_mode is not p.right_mode:
        op = ConvolutionOperator(d, p.v, vals.size, p.step, p.right_mode)
    m = op.mean_read(vals)
    Tc = m * (2.0 - m)
    gap = sign * (Tc - vals)
    k = int(np.argmax(gap))
    tol = grid_tolerance(p)
    worst = float(gap[k])
    return CheckReport(passed=worst <= tol, max_violation=worst, tolerance=tol, argmax=float(k * p.step))


def check_super_inequality(p, d, operator=None):
    """``max_x T(c_+)(x) - c_+(x)`` over the grid, against :func:`grid_tolerance`.

    Rows with ``x < 0`` are omitted: both sides vanish there.
    """
    if p.kind is not Kind.SUPER:
        raise ValueError("expected a super-solution profile")
    return _check(p, d, operator, +1.0)


def check_sub_inequality(p, d, operator=None):
    """``max_x c_-(x) - T(c_-)(x)`` over the grid, against :func:`grid_tolerance`."""
    if p.kind is not Kind.SUB:
        raise ValueError("expected a sub-solution profile")
    return _check(p, d, operator, -1.0)
