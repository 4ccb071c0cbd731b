import dataclasses
import math

import numpy as np
import pytest

from killedbrw.critical import LOG2, critical_params
from killedbrw.errors import EpsTooLarge, NotSubcritical
from killedbrw.fixedpoint import GridConfig, RightMode, iterate_to_fixed_point
from killedbrw.fronts import (
    Kind,
    build_sub,
    build_super,
    check_sub_inequality,
    check_super_inequality,
    grid_tolerance,
    leading_log,
    snap_eps,
    support_radius,
)
from killedbrw.laws import BATTERY
from killedbrw.linwave import d_profile
from killedbrw.step_dist import StepDistribution

U3 = BATTERY["u3"]


def test_support_radius():
    assert support_radius(BATTERY["fair"], 0.5) == 0.5
    assert support_radius(U3, 0.9) == pytest.approx(1.9)
    for d in BATTERY.values():
        assert support_radius(d, d.zeta_plus) == d.zeta_plus - d.zeta_minus


@pytest.fixture(scope="module")
def u3_fronts():
    crit = critical_params(U3)
    eps = snap_eps(crit, U3, 0.02, 1e-3)
    return crit, build_super(crit, U3, eps), build_sub(crit, U3, eps)


def test_super_branches(u3_fronts):
    _, p, _ = u3_fronts
    assert p(-1e-9) == 0.0 and p(-5.0) == 0.0
    assert p(p.cutoff + 1e-9) == 1.0 and p(100.0) == 1.0
    assert p(p.cutoff) == pytest.approx(1.0, abs=1e-12)
    # the amplitude satisfies its defining identity
    y = p.wave.L - p.delta
    assert p.A_eps * math.exp(p.wave.alpha * y) * math.sin(p.wave.beta * y) == pytest.approx(1.0, abs=1e-10)
    assert p.grid.is_in_H() and p.grid.right_mode is RightMode.CLAMP_ONE


def test_sub_branches(u3_fronts):
    _, _, p = u3_fronts
    eps = p.eps
    gamma = 2 * math.exp(-eps * eps)
    assert p.gamma_eps == pytest.approx(gamma, rel=1e-14)
    assert p.h_eps == pytest.approx(gamma * (2 - gamma), rel=1e-12)
    assert p.plateau == p.h_eps < 1
    assert p(p.cutoff) == pytest.approx(p.h_eps, rel=1e-12)
    assert p(p.cutoff + 1.0) == p.h_eps and p(-0.1) == 0.0
    assert p.grid.is_in_H() and p.grid.right_mode is RightMode.CLAMP_LAST


def test_gamma_closed_form():
    eps = 0.1
    gamma = 2 * math.exp(-eps * eps)
    assert gamma == pytest.approx(1.980099, abs=1e-6)
    h = gamma * (2 - gamma)
    assert h == pytest.approx(0.0394, abs=1e-4)
    assert h == pytest.approx(math.exp(-(-LOG2 + eps * eps)) * (2 - math.exp(-(-LOG2 + eps * eps))))


def test_sampled_properties(u3_fronts):
    _, sup, sub = u3_fronts
    C, D = sup.cutoff, sup.delta
    x = np.linspace(C, C + D, 500)
    assert np.all(sup.oscillatory(x) >= 1 - 1e-12)
    x = np.linspace(sub.cutoff, sub.cutoff + sub.delta, 500)
    assert np.all(sub.oscillatory(x) <= sub.h_eps + 1e-12)
    for p in (sup, sub):
        assert np.all(np.diff(p.node_values()) >= 0)


def test_eps_too_large():
    crit = critical_params(U3)
    with pytest.raises(EpsTooLarge):
        build_super(crit, U3, 0.08)
    with pytest.raises(EpsTooLarge):
        build_sub(crit, U3, 0.05)


def test_not_subcritical():
    d = BATTERY["fair"]
    with pytest.raises(NotSubcritical):
        build_super(critical_params(d), d, 0.01)


@pytest.mark.parametrize("eps", [0.04, 0.02, 0.01])
def test_inequalities_hold(sub_law, eps):
    _, d, crit = sub_law
    e = snap_eps(crit, d, eps, 1e-3)
    try:
        sup = build_super(crit, d, e)
        sub = build_sub(crit, d, e)
    except EpsTooLarge:
        pytest.skip("eps outside the admissible range for this law")
    r_sup = check_super_inequality(sup, d)
    r_sub = check_sub_inequality(sub, d)
    assert r_sup.passed and r_sub.passed
    assert r_sup.tolerance == grid_tolerance(sup) > 0
    # negative controls
    assert not check_super_inequality(dataclasses.replace(sup, plateau=0.5), d).passed
    assert not check_sub_inequality(dataclasses.replace(sub, plateau=1.0), d).passed


def test_kind_mismatch(u3_fronts):
    _, sup, sub = u3_fronts
    with pytest.raises(ValueError):
        check_super_inequality(sub, U3)
    with pytest.raises(ValueError):
        check_sub_inequality(sup, U3)


def test_sandwich_fixed_point_at_002(u3_fronts):
    _, sup, sub = u3_fronts
    res = iterate_to_fixed_point(U3, sup.v, GridConfig(step=1e-3, x_max=sup.x_max))
    q = res.q.values
    assert np.all(q <= sup.node_values() + grid_tolerance(sup))
    assert np.all(q >= sub.node_values() - grid_tolerance(sub))


def test_log_c1_is_leading_order_up_to_log_eps(sub_law):
    """(log c(1) - leading term) / |log eps| stays bounded as eps shrinks."""
    _, d, crit = sub_law
    for build in (build_super, build_sub):
        ratios = []
        for eps in (0.01, 0.0025, 6.25e-4, 1.5625e-4):
            p = build(crit, d, eps, step=1e-2)
            assert p.log_c1() <= 0
            ratios.append((p.log_c1() - leading_log(crit, eps)) / abs(math.log(eps)))
        assert max(abs(r) for r in ratios) <= 3.0
        # the leading term takes over
        p = build(crit, d, 1.5625e-4, step=1e-2)
        assert p.log_c1() / leading_log(crit, 1.5625e-4) == pytest.approx(1.0, abs=0.2)
