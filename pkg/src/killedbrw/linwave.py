"""Exponential solutions of the linearised convolution equation.

Near the critical speed, ``c(x) = e^{-a} E c(x + zeta - v)`` has solutions
``e^{phi x}`` where ``phi`` is a complex root of
``Lambda(t) - t v = a``. Its real part sets the growth rate and its
imaginary part the wavelength of the damped sinusoid
``d(x) = e^{alpha x} sin(beta x)`` used to build comparison fronts.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .critical import LOG2, Regime
from .errors import NoConvergence, NotSubcritical, ZeroLaplace
from .step_dist import log_laplace_complex, log_laplace_complex_d1

__all__ = [
    "LinearWave",
    "solve_phi",
    "phi_seed",
    "linear_wave",
    "wavelength",
    "d_profile",
    "d_profile_prime",
    "support_radius",
    "is_admissible",
    "eps_max",
]

_MAX_ITERS = 100
_F_TOL = 1e-13


@dataclass(frozen=True)
class LinearWave:
    """Root of the characteristic equation at ``v = v_star - eps`` and derived quantities."""

    eps: float
    v: float
    a_eps: float
    phi: complex
    L: float
    residual: float

    @property
    def alpha(self):
        return self.phi.real

    @property
    def beta(self):
        return self.phi.imag

    def to_json(self):
        return {"phi_re": self.alpha, "phi_im": self.beta, "L": self.L, "residual": self.residual}


def phi_seed(crit, eps):
    """Leading-order root ``t* + i sqrt(2 t* eps / Lambda''(t*))``."""
    return complex(crit.t_star, math.sqrt(2.0 * crit.t_star * eps / crit.lambda2_star))


def _newton(d, v, a, z):
    """Damped complex Newton on ``Lambda(t) - t v - a``; returns the root or raises NoConvergence."""
    F = lambda t: log_laplace_complex(d, t) - t * v - a
    fz = F(z)
    for _ in range(_MAX_ITERS):
        if abs(fz) <= _F_TOL:
            return z, abs(fz)
        step = fz / (log_laplace_complex_d1(d, z) - v)
        lam = 1.0
        while True:
            trial = z - lam * step
            try:
                ft = F(trial)
            except ZeroLaplace:
                ft = None
            if ft is not None and abs(ft) < abs(fz):
                break
            lam *= 0.5
            if lam < 2.0**-30:
                raise NoConvergence(f"Newton stalled at t={z} with |F|={abs(fz):.3e}")
        z, fz = trial, ft
    if abs(fz) <= 1e-12:
        return z, abs(fz)
    raise NoConvergence(f"no convergence after {_MAX_ITERS} iterations (|F|={abs(fz):.3e})")


def _acceptable(crit, z):
    # the branch we want leaves t* vertically; a far-away root is a different branch
    return z.imag > 0.0 and z.real > 0.0 and abs(z - crit.t_star) < crit.t_star + 10.0


def solve_phi(crit, d, eps, a_eps=-LOG2, continuation_steps=24):
    """Complex root of ``Lambda(t) - t (v* - eps) = a_eps`` in the upper half plane.

    Newton is started from :func:`phi_seed`. If it fails, or lands on a root
    off the branch emanating from ``t*``, the root is followed by continuation
    from ``eps * 2**-continuation_steps`` up to ``eps`` (with ``a`` deformed
    along ``-log 2 + (a_eps + log 2)(s/eps)^2``).

    Raises
    ------
    NotSubcritical
        If ``crit`` carries no tilting parameter.
    NoConvergence
        If neither route converges.
    """
    if crit.regime is not Regime.SUBCRITICAL:
        raise NotSubcritical("characteristic roots need a subcritical law")
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    if abs(a_eps + LOG2) > 0.5:
        raise ValueError("a_eps must lie within 0.5 of -log 2")
    v = crit.v_star - eps
    try:
        z, _ = _newton(d, v, a_eps, phi_seed(crit, eps))
        if _acceptable(crit, z):
            return z
    except NoConvergence:
        pass

    da = a_eps + LOG2
    scales = [eps * 2.0 ** (-k) for k in range(continuation_steps, -1, -1)]
    z = phi_seed(crit, scales[0])
    prev_s = None
    for s in scales:
        if prev_s is not None:
            # phi - t* scales like sqrt(s) to leading order
            z = crit.t_star + (z - crit.t_star) * math.sqrt(s / prev_s)
        z, _ = _newton(d, crit.v_star - s, -LOG2 + da * (s / eps) ** 2, z)
        prev_s = s
    if not _acceptable(crit, z):
        raise NoConvergence(f"continuation ended off-branch at {z}")
    return z


def wavelength(alpha, beta):
    """Location of the maximum of ``d`` on ``[0, pi/beta]``: ``(pi - atan(beta/alpha)) / beta``."""
    if not (alpha > 0 and beta > 0):
        raise ValueError("wavelength needs alpha > 0 and beta > 0")
    return (math.pi - math.atan(beta / alpha)) / beta


def d_profile(alpha, beta, x):
    """``e^{alpha x} sin(beta x)``."""
    x = np.asarray(x, dtype=float)
    out = np.exp(alpha * x) * np.sin(beta * x)
    return float(out) if out.ndim == 0 else out


def d_profile_prime(alpha, beta, x):
    x = np.asarray(x, dtype=float)
    out = np.exp(alpha * x) * (alpha * np.sin(beta * x) + beta * np.cos(beta * x))
    return float(out) if out.ndim == 0 else out


def characteristic_residual(d, v, phi, a):
    """``|E e^{phi (zeta - v)} - e^{a}|``."""
    lhs = np.sum(d.probs * np.exp(phi * (d.values - v)))
    return float(abs(lhs - cmath.exp(a)))


def linear_wave(crit, d, eps, a_eps=-LOG2):
    """Solve for ``phi`` and package it with the derived wavelength."""
    phi = solve_phi(crit, d, eps, a_eps)
    v = crit.v_star - eps
    wave = LinearWave(
        eps=float(eps),
        v=v,
        a_eps=float(a_eps),
        phi=phi,
        L=wavelength(phi.real, phi.imag),
        residual=characteristic_residual(d, v, phi, a_eps),
    )
    return wave


def support_radius(d, v):
    """Smallest ``Delta`` with ``P(|zeta - v| <= Delta) = 1``."""
    return max(abs(d.zeta_minus - v), abs(d.zeta_plus - v))


def is_admissible(crit, d, eps, margin=0.0, a_eps=-LOG2):
    """True when the root exists on the right branch and ``L > 2 Delta + margin``."""
    try:
        wave = linear_wave(crit, d, eps, a_eps)
    except (NoConvergence, ZeroLaplace):
        return False
    return wave.L > 2.0 * support_radius(d, crit.v_star - eps) + margin


def eps_max(crit, d, margin=1.0, eps_lo=1e-6, eps_hi=1.0, ratio=2.0**0.25):
    """Largest ``eps`` on a geometric grid below which every grid point is admissible.

    Admissible means :func:`is_admissible` with the given ``margin``. The
    default of one unit leaves room for the front construction; the fronts
    themselves only need a margin of one grid step.
    """
    best = None
    eps = eps_lo
    while eps <= eps_hi:
        if not is_admissible(crit, d, eps, margin):
            break
        best = eps
        eps *= ratio
    return best
