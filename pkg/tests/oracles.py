"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code: the oracles work from
the raw atoms, in exact integer or rational arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def _scaled(atoms, v, x0):
    """Atoms, v and x0 as integers after multiplying by a common denominator."""
    fr = [Fraction(a).limit_denominator(10**6) for a, _ in atoms]
    fv = Fraction(v).limit_denominator(10**6)
    fx = Fraction(x0).limit_denominator(10**6)
    den = math.lcm(*(f.denominator for f in fr + [fv, fx]))
    return [int(f * den) for f in fr], int(fv * den), int(fx * den)


def brute_force_qn(atoms, v, n, x0=0.0):
    """``P(some ray of the depth-n binary tree stays >= v i)`` by listing every configuration.

    All ``k^(2^(n+1) - 2)`` joint step assignments of the full tree are
    enumerated (vectorised), each ray is checked, and the probabilities of
    the surviving configurations are summed. Meant for ``n <= 3``.
    """
    vals, vi, xi = _scaled(atoms, v, x0)
    probs = np.array([p for _, p in atoms], dtype=float)
    vals = np.array(vals, dtype=np.int64)
    if xi < 0:
        return 0.0
    if n == 0:
        return 1.0
    edges = 2 ** (n + 1) - 2
    k = len(atoms)
    # every configuration as a row of atom indices, edge e belongs to heap node e + 2
    idx = np.indices((k,) * edges).reshape(edges, -1).T
    weight = np.prod(probs[idx], axis=1)
    step = vals[idx]
    survived = np.zeros(idx.shape[0], dtype=bool)
    for leaf in range(2**n, 2 ** (n + 1)):
        path = []
        node = leaf
        while node > 1:
            path.append(node)
            node //= 2
        path.reverse()
        pos = np.full(idx.shape[0], xi, dtype=np.int64)
        ok = np.ones(idx.shape[0], dtype=bool)
        for depth, node in enumerate(path, start=1):
            pos = pos + step[:, node - 2]
            ok &= pos >= vi * depth
        survived |= ok
    return float(weight[survived].sum())


def exact_qn(atoms, v, n, x0=0.0):
    """``q_n(x0)`` as a Fraction from the one-step recursion, memoised on integer positions."""
    vals, vi, xi = _scaled(atoms, v, x0)
    probs = [Fraction(p).limit_denominator(10**9) for _, p in atoms]
    total = sum(probs)
    probs = [p / total for p in probs]
    offsets = [a - vi for a in vals]

    @lru_cache(maxsize=None)
    def q(m, x):
        if x < 0:
            return Fraction(0)
        if m == 0:
            return Fraction(1)
        s = sum(p * q(m - 1, x + o) for p, o in zip(probs, offsets))
        return 2 * s - s * s

    return q(n, xi)


def gw_extinction(p, iters=200_000):
    """Extinction probability of Binomial(2, p) offspring by iterating the generating function."""
    s = 0.0
    for _ in range(iters):
        s_new = (1.0 - p + p * s) ** 2
        if abs(s_new - s) < 1e-16:
            break
        s = s_new
    return s
