"""Monte Carlo estimates of ``q_n(x) = P_x(A_n(v))`` by pruned depth-first search.

Each replica grows the binary tree lazily from the root and stops at the
first ray that reaches depth ``n`` while staying on or above the line
``S >= v i``. A node at depth ``i`` with position ``S < v i`` is discarded
with its subtree.

Random numbers come from a keyed hash chain rather than a sequential stream:
the root of replica ``r`` has key ``mix(mix(seed) + r)`` and child ``c`` (0 or
1) of a node with key ``k`` has key ``mix(k ^ (c + 1) * G)``, ``G`` the 64-bit
golden ratio constant and ``mix`` the splitmix64 finaliser. The step taken
into a node is read from the top 53 bits of its key. A step is therefore a
function of ``(seed, replica, path)`` only, so results do not depend on the
traversal order, the number of threads, ``v`` or ``x0``, and runs with a
common seed share random numbers exactly.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numba as nb
import numpy as np

from .errors import BudgetDominated
from .fixedpoint import Source, SurvivalEstimate

# prefer OpenMP: many system TBB builds are too old for numba and only warn
if "NUMBA_THREADING_LAYER" not in os.environ:
    nb.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

__all__ = ["SimConfig", "simulate_outcomes", "estimate_qn", "estimate_qinf_proxy"]

SURVIVED = 1
KILLED = 0
BUDGET = -1

_BUDGET_SHARE = 0.01

_G = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@nb.njit(inline="always", cache=True)
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@nb.njit(inline="always", cache=True)
def _unit(key):
    return (key >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@nb.njit(inline="always", cache=True)
def _draw(values, cum, u):
    # first atom whose cumulative mass exceeds u
    k = 0
    last = values.size - 1
    while k < last and cum[k] <= u:
        k += 1
    return values[k]


@nb.njit(cache=True)
def _replica(values, cum, v, n, x0, root, budget):
    if x0 < -1e-12 * (1.0 + abs(x0)):
        return KILLED
    if n == 0:
        return SURVIVED
    keys = np.empty(n + 1, dtype=np.uint64)
    pos = np.empty(n + 1)
    nxt = np.zeros(n + 1, dtype=np.int64)
    keys[0] = root
    pos[0] = x0
    depth = 0
    visited = 0
    while depth >= 0:
        c = nxt[depth]
        if c == 2:
            depth -= 1
            continue
        nxt[depth] = c + 1
        key = _mix(keys[depth] ^ (np.uint64(c + 1) * _G))
        visited += 1
        if visited > budget:
            return BUDGET
        s = pos[depth] + _draw(values, cum, _unit(key))
        line = v * (depth + 1)
        if s < line - 1e-12 * (1.0 + abs(line)):
            continue
        if depth + 1 == n:
            return SURVIVED
        depth += 1
        keys[depth] = key
        pos[depth] = s
        nxt[depth] = 0
    return KILLED


@nb.njit(parallel=True, cache=True)
def _run(values, cum, v, n, x0, seed, first, count, budget):
    out = np.empty(count, dtype=np.int8)
    base = _mix(seed)
    for j in nb.prange(count):
        root = _mix(base + np.uint64(first + j))
        out[j] = _replica(values, cum, v, n, x0, root, budget)
    return out


@dataclass(frozen=True)
class SimConfig:
    """Parameters of a Monte Carlo run.

    ``node_budget`` caps the number of tree nodes a single replica may
    generate; a replica that exhausts it scores 0 and is counted as a
    budget hit.
    """

    v: float
    n: int
    x0: float = 0.0
    replicas: int = 100_000
    seed: int = 0
    node_budget: int = 10_000_000

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.replicas < 1:
            raise ValueError("need at least one replica")
        if self.node_budget < 1:
            raise ValueError("node_budget must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


def simulate_outcomes(d, cfg, first=0):
    """Per-replica outcomes: 1 survived, 0 killed, -1 node budget exhausted.

    ``first`` offsets the replica index, so disjoint blocks of one seed
    can be run separately and concatenated.
    """
    return _run(
        np.ascontiguousarray(d.values),
        np.ascontiguousarray(d.cumulative),
        float(cfg.v),
        int(cfg.n),
        float(cfg.x0),
        np.uint64(cfg.seed),
        int(first),
        int(cfg.replicas),
        int(cfg.node_budget),
    )


def estimate_qn(d, cfg):
    """Estimate ``q_n(x0)`` with a 95% normal half-width.

    ``err`` is clipped so that ``value +/- err`` stays in ``[0, 1]``; the raw
    half-width and the standard error are kept in ``meta``.

    Raises
    ------
    BudgetDominated
        If more than 1% of replicas exhausted the node budget.
    """
    out = simulate_outcomes(d, cfg)
    hits = int(np.count_nonzero(out == BUDGET))
    p = float(np.count_nonzero(out == SURVIVED)) / cfg.replicas
    if hits > _BUDGET_SHARE * cfg.replicas:
        raise BudgetDominated(p, hits, cfg.replicas)
    se = math.sqrt(p * (1.0 - p) / cfg.replicas)
    half = 1.96 * se
    return SurvivalEstimate(
        p,
        Source.MONTE_CARLO,
        err=min(half, p, 1.0 - p),
        meta={"se": se, "half_width": half, "budget_hits": hits, "replicas": cfg.replicas,
              "n": cfg.n, "v": cfg.v, "x0": cfg.x0, "seed": cfg.seed},
    )


def estimate_qinf_proxy(d, cfg):
    """``q_n`` at large ``n`` as a stand-in for ``q_inf``, with a companion run at ``2n``.

    The value is an upper bound on ``q_inf`` up to sampling error, since
    ``A_{2n}`` is contained in ``A_n``. The companion estimate sits in
    ``meta["companion"]``; it reuses the seed, so the two runs share random
    numbers and the difference reflects only the extra generations.
    """
    est = estimate_qn(d, cfg)
    twice = estimate_qn(d, replace(cfg, n=2 * cfg.n))
    meta = dict(est.meta)
    meta["bound"] = "upper"
    meta["companion"] = {"n": twice.meta["n"], "value": twice.value, "err": twice.err}
    return SurvivalEstimate(est.value, est.source, est.err, meta)
