import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from killedbrw.critical import critical_params
from killedbrw.errors import DomainError, MaxIters, PropertyViolation
from killedbrw.fixedpoint import (
    ConvolutionOperator,
    GridConfig,
    GridFunction,
    RightMode,
    Source,
    SurvivalEstimate,
    apply_T,
    indicator,
    iterate_to_fixed_point,
    lattice_step,
    psi,
    psi_minus,
    psi_plus,
    q_n,
    snap_to_lattice,
)
from killedbrw.fronts import build_sub, build_super, grid_tolerance, snap_eps
from killedbrw.laws import BATTERY
from killedbrw.step_dist import StepDistribution
from oracles import brute_force_qn, exact_qn

FAIR = BATTERY["fair"]
U3 = BATTERY["u3"]


def random_h(rng, n, top=1.0):
    vals = np.cumsum(rng.exponential(size=n))
    vals = top * vals / vals[-1] * rng.uniform(0.2, 1.0)
    vals[: rng.integers(0, n // 2)] = 0.0
    return vals


def test_psi_examples():
    assert psi(0.0) == 0.0 and psi(1.0) == 1.0 and psi(0.5) == 0.75
    g = 1.98
    assert psi_minus(1.0, g, g * (2 - g)) == pytest.approx(g * (2 - g))
    with pytest.raises(DomainError):
        psi(1.0 + 1e-9)
    with pytest.raises(DomainError):
        psi_plus(-1e-9)
    assert psi(1.0 + 1e-13) == 1.0


@settings(max_examples=200)
@given(st.floats(0, 1), st.floats(0, 1))
def test_psi_scaling(lam, s):
    assert psi(lam * s) >= lam * psi(s) - 1e-12


@given(st.floats(0, 1), st.floats(1e-4, 0.3))
def test_psi_ordering(s, eps):
    gamma = math.exp(math.log(2) - eps * eps)
    h = gamma * (2 - gamma)
    assert psi_minus(s, gamma, h) <= psi(s) <= psi_plus(s)


def test_grid_function_eval_contract():
    g = GridFunction(0.5, [0.2, 0.4, 0.8], RightMode.CLAMP_ONE)
    assert g.eval(-1e-9) == 0.0
    assert g.eval(0.0) == 0.2
    assert g.eval(0.25) == pytest.approx(0.3)
    assert g.eval(1.0) == 0.8
    assert g.eval(1.01) == 1.0
    assert GridFunction(0.5, [0.2, 0.4, 0.8], "clamplast").eval(5.0) == 0.8
    assert g.x_max == 1.0 and g.is_in_H()


def test_grid_function_rejects_non_members():
    with pytest.raises(PropertyViolation):
        GridFunction(0.1, [0.0, 0.5, 0.4])
    with pytest.raises(PropertyViolation):
        GridFunction(0.1, [0.0, 0.5, 1.1])


def test_apply_T_examples():
    # the zero function: ClampOne would put 1 beyond x_max
    zero = GridFunction(0.2, np.zeros(11), RightMode.CLAMP_LAST)
    assert np.all(apply_T(zero, FAIR, 0.2).values == 0.0)
    out = apply_T(indicator(11, 0.2), FAIR, 0.2)
    assert out.eval(0.0) == 0.75
    assert apply_T(out, FAIR, 0.2).eval(0.0) == 0.75
    assert out.step == 0.2 and out.n == 11 and out.right_mode is RightMode.CLAMP_ONE


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(RightMode)), st.floats(0.3, 0.9))
def test_T_is_monotone(seed, mode, v):
    rng = np.random.default_rng(seed)
    n = 200
    lo = random_h(rng, n)
    hi = np.maximum(lo, random_h(rng, n))
    h1, h2 = GridFunction(0.05, lo, mode), GridFunction(0.05, hi, mode)
    t1, t2 = apply_T(h1, U3, v), apply_T(h2, U3, v)
    assert np.all(t1.values <= t2.values)
    assert t1.is_in_H() and t2.is_in_H()


def test_lattice_step_and_snap():
    assert lattice_step(FAIR, 0.2) == pytest.approx(0.2)
    assert lattice_step(U3, 0.5) == pytest.approx(0.5)
    assert lattice_step(U3, math.sqrt(2) / 3) is None
    v = snap_to_lattice(U3, 0.8682416, 1e-3)
    assert v == pytest.approx(0.868)
    assert ConvolutionOperator(U3, v, 10, 1e-3).lattice
    assert not ConvolutionOperator(U3, 0.8682416, 10, 1e-3).lattice


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_q_n_matches_brute_force(n):
    for d, v in ((FAIR, 0.2), (U3, 0.5), (BATTERY["skew3"], 0.25)):
        expected = brute_force_qn(d.atoms, v, n)
        assert q_n(d, v, n).eval(0.0) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("n", [4, 8, 12])
def test_q_n_matches_exact_recursion(n):
    for d, v in ((FAIR, 0.2), (U3, 0.5), (BATTERY["bern04"], 0.75)):
        assert abs(q_n(d, v, n).eval(0.0) - float(exact_qn(d.atoms, v, n))) <= 1e-12
    assert q_n(U3, 0.5, n).eval(1.0) == pytest.approx(float(exact_qn(U3.atoms, 0.5, n, x0=1.0)), abs=1e-12)


def test_q_zero_is_indicator():
    q = q_n(U3, 0.5, 0)
    assert np.all(q.values == 1.0)


def test_v_above_support_dies():
    res = iterate_to_fixed_point(FAIR, 1.2)
    assert np.all(res.q.values == 0.0)
    assert res.q0.meta["v_ge_v_star"]


def test_v_below_support_survives():
    res = iterate_to_fixed_point(FAIR, -0.1)
    assert np.all(res.q.values == 1.0)


def test_max_iters():
    with pytest.raises(MaxIters) as info:
        iterate_to_fixed_point(U3, 0.85, max_iters=5)
    assert info.value.iters == 5 and info.value.delta > 0


def test_fixed_point_properties(sub_law):
    _, d, crit = sub_law
    v = snap_to_lattice(d, crit.v_star - 0.04, 1e-3)
    res = iterate_to_fixed_point(d, v, GridConfig(step=1e-3))
    assert res.lattice
    q = res.q
    assert 0 < res.q0.value <= res.q1.value
    assert q.is_in_H()
    # fixed point to working precision
    assert np.max(np.abs(apply_T(q, d, v).values - q.values) / np.maximum(q.values, 1e-300)) <= 1e-10
    assert res.q0.source is Source.FIXED_POINT and res.q0.err < 1e-10 * res.q0.value + 1e-300


def test_right_modes_bracket_off_lattice():
    d = U3
    v = critical_params(d).v_star - 0.05
    hi = iterate_to_fixed_point(d, v, GridConfig(step=0.01, x_max=6.0, right_mode="clamp1")).q0
    lo = iterate_to_fixed_point(d, v, GridConfig(step=0.01, x_max=6.0, right_mode="clamplast")).q0
    assert lo.value <= hi.value
    assert not hi.meta["lattice"] and hi.err > 0


def test_survival_estimate_invariant():
    with pytest.raises(ValueError):
        SurvivalEstimate(0.5, Source.MONTE_CARLO, err=0.6)
    SurvivalEstimate(0.5, Source.MONTE_CARLO, err=0.5)


class TestComparisonIterates:
    """Iterating T from a front moves monotonically towards q_inf."""

    @pytest.fixture(scope="class")
    @classmethod
    def setup(cls):
        d = U3
        crit = critical_params(d)
        eps = snap_eps(crit, d, 0.02, 1e-3)
        sup = build_super(crit, d, eps)
        sub = build_sub(crit, d, eps, x_max=sup.x_max)
        res = iterate_to_fixed_point(d, sup.v, GridConfig(step=1e-3, x_max=sup.x_max))
        return d, sup, sub, res

    def test_super_descends(self, setup):
        d, sup, _, res = setup
        h = sup.grid
        tau = grid_tolerance(sup)
        for _ in range(200):
            nxt = apply_T(h, d, sup.v)
            assert np.all(nxt.values <= h.values + 1e-15)
            assert np.all(nxt.values >= res.q.values - tau)
            h = nxt

    def test_sub_ascends_below_q_n(self, setup):
        d, _, sub, _ = setup
        h = sub.grid
        q = indicator(h.n, h.step, h.right_mode)
        for _ in range(200):
            nxt = apply_T(h, d, sub.v)
            q = apply_T(q, d, sub.v)
            assert np.all(nxt.values >= h.values - 1e-15)
            assert np.all(nxt.values <= q.values + 1e-15)
            h = nxt
