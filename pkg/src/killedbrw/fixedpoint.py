"""Survival probabilities as fixed points of a monotone convolution operator.

Functions in the class H (nondecreasing, [0, 1]-valued, zero on the negative
half-line) are represented by their values on a uniform grid over
``[0, x_max]``. The operator

    T(h)(x) = psi(E h(x + zeta - v)),   x >= 0,     psi(s) = 2s - s^2

is applied with exact atom sums. Off-node reads use linear interpolation,
which vanishes entirely when every offset ``zeta_i - v`` is a multiple of
the grid step ("lattice mode").
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .critical import Regime, critical_params
from .errors import DomainError, MaxIters, NoConvergence, PropertyViolation
from .linwave import linear_wave, support_radius

__all__ = [
    "RightMode",
    "GridFunction",
    "Source",
    "SurvivalEstimate",
    "GridConfig",
    "ConvolutionOperator",
    "FixedPointResult",
    "psi",
    "psi_plus",
    "psi_minus",
    "apply_T",
    "iterate_to_fixed_point",
    "q_n",
    "lattice_step",
    "snap_to_lattice",
    "indicator",
]

log = logging.getLogger(__name__)

# relative slack for "is this offset on a node"
_SNAP = 1e-9
_MONO_SLACK = 1e-14


class RightMode(enum.Enum):
    """Extension of a grid function to the right of ``x_max``."""

    CLAMP_ONE = "clamp1"
    CLAMP_LAST = "clamplast"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Element of H sampled at ``0, step, ..., x_max``.

    ``values[0]`` is the right limit at 0; evaluation returns 0 strictly left
    of 0 and never interpolates across that jump.
    """

    step: float
    values: np.ndarray
    right_mode: RightMode = RightMode.CLAMP_ONE

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("need a 1-d array of at least two node values")
        if not self.step > 0:
            raise ValueError("step must be positive")
        vals = _certify(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "right_mode", RightMode.parse(self.right_mode))

    @property
    def n(self):
        return self.values.size

    @property
    def x_max(self):
        return self.step * (self.n - 1)

    @property
    def nodes(self):
        return self.step * np.arange(self.n)

    @property
    def fill(self):
        """Value used beyond ``x_max``."""
        return 1.0 if self.right_mode is RightMode.CLAMP_ONE else float(self.values[-1])

    def with_values(self, values):
        return GridFunction(self.step, values, self.right_mode)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        u = x / self.step
        r = np.rint(u)
        u = np.where(np.abs(u - r) <= _SNAP, r, u)
        lo = np.clip(np.floor(u).astype(np.int64), 0, self.n - 1)
        hi = np.minimum(lo + 1, self.n - 1)
        w = u - np.floor(u)
        out = (1.0 - w) * self.values[lo] + w * self.values[hi]
        out = np.where(u > self.n - 1, self.fill, out)
        out = np.where(u < 0, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def max_slope(self):
        return float(np.max(np.diff(self.values)) / self.step)

    def is_in_H(self):
        v = self.values
        return bool(v.min() >= 0.0 and v.max() <= 1.0 and np.all(np.diff(v) >= 0.0))

    def to_csv(self, path, header="x,value"):
        np.savetxt(path, np.column_stack([self.nodes, self.values]), delimiter=",", header=header, comments="")


def indicator(n, step, right_mode=RightMode.CLAMP_ONE):
    """``1_{[0, inf)}`` on ``n`` nodes."""
    return GridFunction(step, np.ones(n), right_mode)


class Source(enum.Enum):
    FIXED_POINT = "fixed_point"
    MONTE_CARLO = "monte_carlo"
    LOWER_BOUND = "lower_bound"
    UPPER_BOUND = "upper_bound"


@dataclass(frozen=True)
class SurvivalEstimate:
    """A probability with its provenance and error bar."""

    value: float
    source: Source
    err: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.err < 0 or self.value - self.err < -1e-12 or self.value + self.err > 1 + 1e-12:
            raise ValueError(f"estimate {self.value} +/- {self.err} leaves [0, 1]")

    @property
    def lower(self):
        return max(0.0, self.value - self.err)

    @property
    def upper(self):
        return min(1.0, self.value + self.err)


def _check_unit(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < -1e-12) or np.any(s > 1 + 1e-12):
        raise DomainError("argument outside [0, 1]")
    return np.clip(s, 0.0, 1.0)


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def psi(s):
    """``2s - s^2``."""
    s = _check_unit(s)
    return _scalar(s * (2.0 - s))


def psi_plus(s):
    """``min(2s, 1)``, an upper bound for :func:`psi`."""
    s = _check_unit(s)
    return _scalar(np.minimum(2.0 * s, 1.0))


def psi_minus(s, gamma, h):
    """``min(gamma s, h)``, a lower bound for :func:`psi` when ``h = gamma (2 - gamma)``."""
    s = _check_unit(s)
    return _scalar(np.minimum(gamma * s, h))


class ConvolutionOperator:
    """The operator ``T`` on a fixed grid, with the read stencil precomputed.

    For each atom and node the read position ``x_j + zeta_i - v`` is split
    into a node index and an interpolation weight once, so that repeated
    applications are a handful of vectorised gathers.
    """

    def __init__(self, d, v, n, step, right_mode=RightMode.CLAMP_ONE):
        self.d = d
        self.v = float(v)
        self.n = int(n)
        self.step = float(step)
        self.right_mode = RightMode.parse(right_mode)
        j = np.arange(self.n, dtype=float)
        self._reads = []
        lattice = True
        for value, prob in d.atoms:
            off = (value - self.v) / self.step
            r = round(off)
            if abs(off - r) <= _SNAP * max(1.0, abs(off)):
                off = float(r)
            else:
                lattice = False
            u = j + off
            fl = np.floor(u)
            w = u - fl
            lo = np.clip(fl.astype(np.int64), 0, self.n - 1)
            hi = np.minimum(lo + 1, self.n - 1)
            zero = u < 0
            beyond = u > self.n - 1
            self._reads.append((prob, lo, hi, w, zero, beyond, bool(np.any(w > 0))))
        self.lattice = lattice

    def mean_read(self, values):
        """``E h(x_j + zeta - v)`` at every node."""
        fill = 1.0 if self.right_mode is RightMode.CLAMP_ONE else values[-1]
        m = np.zeros(self.n)
        for prob, lo, hi, w, zero, beyond, interp in self._reads:
            r = values[lo]
            if interp:
                r = (1.0 - w) * r + w * values[hi]
            r = np.where(beyond, fill, r)
            r = np.where(zero, 0.0, r)
            m += prob * r
        return np.minimum(m, 1.0)

    def apply_values(self, values):
        m = self.mean_read(values)
        return m * (2.0 - m)

    def __call__(self, h):
        return apply_T(h, self.d, self.v, operator=self)


def _certify(values):
    """Check membership in H up to rounding, then remove the rounding noise.

    ``m (2 - m)`` is not monotone in floating point near its flat top, so
    ulp-sized drops are expected and repaired; anything larger is an error.
    """
    if values.min() < -1e-12 or values.max() > 1 + 1e-12:
        raise PropertyViolation("H", f"values leave [0, 1] (range {values.min()}..{values.max()})")
    drops = values[:-1] - values[1:]
    if np.any(drops > _MONO_SLACK * values[:-1] + 1e-300):
        raise PropertyViolation("H", f"values decrease by up to {drops.max():.3e}")
    return np.maximum.accumulate(np.clip(values, 0.0, 1.0))


def apply_T(h, d, v, operator=None):
    """One application of ``T``; the result stays on ``h``'s grid and right mode."""
    op = operator
    if op is None or op.n != h.n or op.step != h.step or op.right_mode is not h.right_mode:
        op = ConvolutionOperator(d, v, h.n, h.step, h.right_mode)
    return GridFunction(h.step, _certify(op.apply_values(h.values)), h.right_mode)


def lattice_step(d, v, max_denominator=1000):
    """Largest step dividing every offset ``zeta_i - v``, or None if none with small denominator exists."""
    fracs = []
    for value in d.values:
        off = float(value) - float(v)
        f = Fraction(off).limit_denominator(max_denominator)
        if abs(float(f) - off) > 1e-12 * max(1.0, abs(off)):
            return None
        fracs.append(f)
    den = 1
    for f in fracs:
        den = den * f.denominator // math.gcd(den, f.denominator)
    g = 0
    for f in fracs:
        g = math.gcd(g, abs(f.numerator * (den // f.denominator)))
    if g == 0:
        return None
    return g / den


def snap_to_lattice(d, v, step):
    """Nearest speed to ``v`` whose offsets ``zeta_i - v`` are all multiples of ``step``.

    Requires the atoms to be mutually commensurate with ``step``.
    """
    base = d.values[0]
    k = (d.values - base) / step
    if np.any(np.abs(k - np.rint(k)) > 1e-9):
        raise ValueError("atom spacings are not multiples of the step")
    return float(base - step * round((base - v) / step))


@dataclass(frozen=True)
class GridConfig:
    """Grid settings; ``None`` fields are filled by :meth:`resolve`."""

    step: float | None = None
    x_max: float | None = None
    right_mode: RightMode = RightMode.CLAMP_ONE
    default_step: float = 0.01

    def resolve(self, d, v, min_x_max=0.0):
        """Concrete ``(step, n, right_mode)``.

        The step defaults to the lattice step of the offsets when one exists
        and to ``default_step`` otherwise. ``x_max`` defaults to
        ``L(eps) + 8 Delta``.
        """
        step = self.step
        if step is None:
            step = lattice_step(d, v) or self.default_step
        x_max = self.x_max
        if x_max is None:
            x_max = default_x_max(d, v)
        x_max = max(x_max, min_x_max, step)
        n = int(math.ceil(x_max / step - 1e-9)) + 1
        return step, n, RightMode.parse(self.right_mode)


def default_x_max(d, v):
    """``L(eps) + 8 Delta``; falls back to ``16 Delta + 1`` away from the near-critical regime."""
    delta = support_radius(d, v)
    crit = critical_params(d)
    eps = crit.v_star - v
    if crit.regime is Regime.SUBCRITICAL and eps > 0:
        try:
            return linear_wave(crit, d, eps).L + 8.0 * delta
        except NoConvergence:
            pass
    return 16.0 * delta + 1.0


@dataclass(frozen=True)
class FixedPointResult:
    q: GridFunction
    q0: SurvivalEstimate
    q1: SurvivalEstimate
    iters: int
    delta: float
    rate: float
    lattice: bool

    def to_json(self):
        return {
            "q0": self.q0.value,
            "q1": self.q1.value,
            "iters": self.iters,
            "delta": self.delta,
            "right_mode": self.q.right_mode.value,
        }


def _rel_change(new, old):
    diff = np.abs(new - old)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(diff == 0.0, 0.0, diff / new)
    return float(rel.max())


def iterate_to_fixed_point(d, v, grid=None, tol=1e-12, max_iters=500_000, start=None):
    """Iterate ``T`` from ``1_{[0, inf)}`` (or ``start``) until the relative sup-norm change is below ``tol``.

    Parameters
    ----------
    d : StepDistribution
    v : float
        Killing slope.
    grid : GridConfig, optional
    tol : float
        Stop once ``max_j |q_{n+1} - q_n|_j / q_{n+1, j} <= tol``.
    start : GridFunction, optional
        Alternative starting point. A super-solution gives a nonincreasing
        sequence, a sub-solution a nondecreasing one; the monotonicity check
        is only enforced for the default start.

    Returns
    -------
    FixedPointResult
        Grid function and estimates at 0 and 1. Their error bars combine the
        geometric tail of the remaining iterations and, off-lattice, a
        linear-interpolation bound.
    """
    grid = grid or GridConfig()
    if start is None:
        step, n, mode = grid.resolve(d, v)
        q = indicator(n, step, mode)
        check_monotone = True
    else:
        step, n, mode = start.step, start.n, start.right_mode
        q = start
        check_monotone = False
    op = ConvolutionOperator(d, v, n, step, mode)
    crit = critical_params(d)
    if v >= crit.v_star:
        log.info("v=%g >= v*=%g: survival probability vanishes in the limit", v, crit.v_star)

    vals = q.values
    delta = math.inf
    prev_delta = math.inf
    rate = 0.0
    for it in range(1, max_iters + 1):
        new = _certify(op.apply_values(vals))
        if check_monotone and np.any(new > vals + _MONO_SLACK * vals + 1e-300):
            raise PropertyViolation("monotone", f"iterate increased at iteration {it}")
        delta = _rel_change(new, vals)
        if math.isfinite(prev_delta) and prev_delta > 0:
            rate = delta / prev_delta
        vals = new
        prev_delta = delta
        if delta <= tol:
            break
    else:
        raise MaxIters(max_iters, delta)

    q = GridFunction(step, vals, mode)
    tail = delta * (rate / (1.0 - rate) if 0.0 < rate < 1.0 else 1.0)
    if op.lattice:
        interp = 0.0
    else:
        interp = float(np.max(np.abs(np.diff(vals, 2)))) / 8.0 if n > 2 else 0.0

    def estimate(x):
        value = q.eval(x)
        err = value * max(tail, tol) + interp
        return SurvivalEstimate(
            value,
            Source.FIXED_POINT,
            err=min(err, value, 1.0 - value),
            meta={"x": x, "iters": it, "step": step, "x_max": q.x_max, "right_mode": mode.value,
                  "lattice": op.lattice, "v_ge_v_star": v >= crit.v_star},
        )

    return FixedPointResult(q, estimate(0.0), estimate(1.0), it, delta, rate, op.lattice)


def q_n(d, v, n, grid=None):
    """``n`` applications of ``T`` to ``1_{[0, inf)}``.

    The default grid reaches ``n (zeta_plus - v)`` beyond 0 so that the value
    at 0 never reads the artificial right extension.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    grid = grid or GridConfig()
    if grid.x_max is None:
        reach = n * max(d.zeta_plus - v, 0.0) + 1.0
        grid = GridConfig(grid.step, reach, grid.right_mode, grid.default_step)
    step, m, mode = grid.resolve(d, v)
    q = indicator(m, step, mode)
    op = ConvolutionOperator(d, v, m, step, mode)
    for _ in range(n):
        q = apply_T(q, d, v, operator=op)
    return q
