"""Finite-support step laws and their log-Laplace transform.

A :class:`StepDistribution` is a finite list of atoms ``(value, prob)``.
Everything downstream (tilting parameter, characteristic roots, the
convolution operator) reads expectations from it as exact finite sums.
"""
from __future__ import annotations

import json
import math
import warnings
from pathlib import Path

import numpy as np

from .errors import ZeroLaplace

__all__ = [
    "StepDistribution",
    "log_laplace",
    "log_laplace_d1",
    "log_laplace_d2",
    "log_laplace_complex",
    "log_laplace_complex_d1",
    "tilted_exceedance",
    "load_distribution",
]

_SUM_TOL = 1e-12
_LOAD_TOL = 1e-9


class StepDistribution:
    """Probability law of a single random-walk step with finitely many atoms.

    Parameters
    ----------
    atoms : iterable of (value, prob)
        Atom locations and masses. Duplicate values are merged and atoms are
        sorted by value. Every mass must be strictly positive.
    normalize : bool
        Rescale masses to sum to one. Without it the masses must already sum
        to one within 1e-12.
    """

    __slots__ = ("values", "probs", "_cum")

    def __init__(self, atoms, normalize=False):
        merged = {}
        for value, prob in atoms:
            value = float(value)
            prob = float(prob)
            if not math.isfinite(value) or not math.isfinite(prob):
                raise ValueError("atoms must be finite numbers")
            if prob <= 0.0:
                raise ValueError(f"atom at {value} has non-positive mass {prob}")
            merged[value] = merged.get(value, 0.0) + prob
        if not merged:
            raise ValueError("a step distribution needs at least one atom")
        values = np.array(sorted(merged), dtype=float)
        probs = np.array([merged[v] for v in values], dtype=float)
        total = math.fsum(probs)
        if normalize:
            probs = probs / total
        elif abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"masses sum to {total!r}, not 1")
        values.setflags(write=False)
        probs.setflags(write=False)
        cum = np.cumsum(probs)
        cum[-1] = 1.0
        cum.setflags(write=False)
        self.values = values
        self.probs = probs
        self._cum = cum

    @classmethod
    def point_mass(cls, c):
        return cls([(c, 1.0)])

    def __repr__(self):
        body = ", ".join(f"({v:g}, {p:g})" for v, p in self.atoms)
        return f"StepDistribution([{body}])"

    def __eq__(self, other):
        if not isinstance(other, StepDistribution):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.values.tobytes(), self.probs.tobytes()))

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))

    @property
    def zeta_minus(self):
        return float(self.values[0])

    @property
    def zeta_plus(self):
        return float(self.values[-1])

    @property
    def p_top(self):
        """Mass of the largest atom."""
        return float(self.probs[-1])

    @property
    def mean(self):
        return float(np.dot(self.probs, self.values))

    @property
    def variance(self):
        m = self.mean
        return float(np.dot(self.probs, (self.values - m) ** 2))

    @property
    def is_degenerate(self):
        return self.values.size == 1

    @property
    def cumulative(self):
        """Cumulative masses, last entry exactly 1 (used for inverse-CDF sampling)."""
        return self._cum

    def shifted(self, c):
        """Law of ``zeta + c``."""
        return StepDistribution(zip(self.values + c, self.probs))

    def sample(self, uniforms):
        """Map uniforms in [0, 1) to atom values by inverse CDF."""
        idx = np.searchsorted(self._cum, uniforms, side="right")
        return self.values[np.minimum(idx, self.values.size - 1)]

    def to_json(self):
        return {"atoms": [{"value": v, "prob": p} for v, p in self.atoms]}


def load_distribution(source):
    """Read a step law from a JSON file path, JSON text, or an already-parsed dict.

    Masses that do not sum to one are renormalised; a warning is emitted when
    the discrepancy exceeds 1e-9.
    """
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        path = Path(text)
        if not text.lstrip().startswith("{") and path.exists():
            text = path.read_text()
        data = json.loads(text)
    atoms = [(a["value"], a["prob"]) for a in data["atoms"]]
    total = math.fsum(p for _, p in atoms)
    if abs(total - 1.0) > _LOAD_TOL:
        warnings.warn(f"atom masses sum to {total!r}; renormalising", stacklevel=2)
    return StepDistribution(atoms, normalize=True)


def _tilted_weights(d, t):
    # tilted law p_i e^{t v_i} / E e^{t zeta}, computed with a max shift
    z = t * d.values
    w = d.probs * np.exp(z - z.max())
    return w / w.sum()


def log_laplace(d, t):
    """``log E exp(t zeta)`` for real ``t`` (scalar or array), overflow safe."""
    t_arr = np.asarray(t, dtype=float)
    z = np.multiply.outer(t_arr, d.values)
    m = z.max(axis=-1)
    out = m + np.log(np.sum(d.probs * np.exp(z - m[..., None]), axis=-1))
    return float(out) if out.ndim == 0 else out


def log_laplace_d1(d, t):
    """First derivative: the mean of the ``t``-tilted law."""
    w = _tilted_weights(d, float(t))
    return float(np.dot(w, d.values))


def log_laplace_d2(d, t):
    """Second derivative: the variance of the ``t``-tilted law."""
    w = _tilted_weights(d, float(t))
    m = np.dot(w, d.values)
    return float(np.dot(w, (d.values - m) ** 2))


def log_laplace_d3(d, t):
    """Third derivative: the third central moment of the tilted law."""
    w = _tilted_weights(d, float(t))
    m = np.dot(w, d.values)
    return float(np.dot(w, (d.values - m) ** 3))


def _complex_sum(d, t):
    t = complex(t)
    shift = float(np.max(t.real * d.values))
    terms = d.probs * np.exp(t * d.values - shift)
    s = terms.sum()
    # a sum this small relative to its terms is pure cancellation noise
    if abs(s) < 1e-300 or abs(s) <= 64 * np.finfo(float).eps * np.abs(terms).sum():
        raise ZeroLaplace(f"E exp(t zeta) vanishes at t={t}")
    return s, shift, terms


def log_laplace_complex(d, t):
    """Principal-branch ``log E exp(t zeta)`` for complex ``t``.

    Raises
    ------
    ZeroLaplace
        If the transform is zero to working precision.
    """
    s, shift, _ = _complex_sum(d, t)
    return complex(shift + np.log(s))


def log_laplace_complex_d1(d, t):
    """Derivative of :func:`log_laplace_complex`: ``E(zeta e^{t zeta}) / E e^{t zeta}``."""
    s, _, terms = _complex_sum(d, t)
    return complex(np.dot(terms, d.values) / s)


def tilted_exceedance(d, v):
    """``P(zeta >= v)``."""
    return float(d.probs[d.values >= v].sum())
