"""The N-particle branching-selection system and its front speed.

Each generation every particle is replaced by two children displaced by
independent steps, and only the N rightmost of the 2N children are kept.
The front advances at a speed ``v_N`` that approaches ``v*`` from below,
with a shift of order ``(log N)^-2``.

Randomness is keyed by slot: before branching the cloud is put in
canonical (descending) order, and the two children of the particle in slot
``i`` of generation ``g`` use uniforms ``2i`` and ``2i + 1`` of
``default_rng([seed, g])``. Since particles at equal positions are
interchangeable, the post-step cloud does not depend on the order in which
positions were supplied.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = ["ParticleCloud", "step", "front_trajectory", "measure_speed", "predicted_shift"]


@dataclass(frozen=True, eq=False)
class ParticleCloud:
    """Positions sorted in descending order, plus the generation counter."""

    positions: np.ndarray
    generation: int = 0

    def __post_init__(self):
        pos = np.sort(np.asarray(self.positions, dtype=float))[::-1].copy()
        if pos.ndim != 1 or pos.size == 0:
            raise ValueError("a cloud needs at least one particle")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @classmethod
    def at_origin(cls, N):
        return cls(np.zeros(int(N)))

    @property
    def N(self):
        return self.positions.size

    @property
    def front(self):
        return float(self.positions[0])


def _branch_select(pos, d, seed, generation):
    N = pos.size
    u = np.random.default_rng([seed, generation]).random(2 * N)
    cand = np.repeat(pos, 2) + d.sample(u)
    # stable sort on -x: among equal positions the earlier candidate wins
    keep = np.argsort(-cand, kind="stable")[:N]
    return cand[keep]


def step(cloud, d, seed):
    """One branching and selection step.

    ``seed`` is a nonnegative integer; together with the generation number
    it determines every displacement.
    """
    pos = _branch_select(cloud.positions, d, seed, cloud.generation)
    return ParticleCloud(pos, cloud.generation + 1)


def front_trajectory(d, N, horizon, seed):
    """Front position after each of ``horizon`` generations, starting from N particles at 0."""
    pos = np.zeros(int(N))
    fronts = np.empty(horizon + 1)
    fronts[0] = 0.0
    for g in range(horizon):
        pos = _branch_select(pos, d, seed, g)
        fronts[g + 1] = pos[0]
    return fronts


def measure_speed(d, N, horizon, seed, burn_in=None, batches=20):
    """Front speed ``v_N`` with a 95% confidence half-width from batch means.

    Parameters
    ----------
    d : StepDistribution
    N : int
        Number of particles.
    horizon : int
        Total number of generations.
    seed : int
    burn_in : int, optional
        Generations discarded before measuring; 20% of ``horizon`` by default.
    batches : int
        Number of equal batches the measured window is split into (at least 10).

    Returns
    -------
    (float, float)
        ``v_hat = (front[horizon] - front[burn_in]) / (horizon - burn_in)`` and
        the half-width ``t_{0.975, B-1} s / sqrt(B)`` of the batch speeds.
    """
    if burn_in is None:
        burn_in = horizon // 5
    if batches < 10:
        raise ValueError("need at least 10 batches")
    if horizon - burn_in < batches:
        raise ValueError("horizon must exceed burn_in by at least one generation per batch")
    fronts = front_trajectory(d, N, horizon, seed)
    v_hat = (fronts[horizon] - fronts[burn_in]) / (horizon - burn_in)
    edges = np.linspace(burn_in, horizon, batches + 1).round().astype(int)
    speeds = np.diff(fronts[edges]) / np.diff(edges)
    ci = stats.t.ppf(0.975, batches - 1) * speeds.std(ddof=1) / math.sqrt(batches)
    return float(v_hat), float(ci)


def predicted_shift(crit, N):
    """Leading-order shift ``(pi^2 / 2) t* Lambda''(t*) / (log N)^2``."""
    return 0.5 * math.pi**2 * crit.asymptotic_constant / math.log(N) ** 2
