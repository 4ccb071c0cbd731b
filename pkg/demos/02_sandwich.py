"""The survival probability squeezed between two explicit fronts.

At v = v* - eps the fixed point q_inf of the survival operator lies between
the sub-solution c_- and the super-solution c_+. On a grid whose step
divides every offset zeta_i - v the operator is applied without
interpolation, so the ordering can be checked node by node.

    python3 demos/02_sandwich.py [law] [eps]
"""
import sys

import numpy as np

from killedbrw.critical import critical_params
from killedbrw.fixedpoint import GridConfig, iterate_to_fixed_point
from killedbrw.fronts import build_sub, build_super, check_sub_inequality, check_super_inequality, snap_eps
from killedbrw.laws import BATTERY

name = sys.argv[1] if len(sys.argv) > 1 else "u3"
eps = float(sys.argv[2]) if len(sys.argv) > 2 else 0.02
step = 1e-3

d = BATTERY[name]
crit = critical_params(d)
eps = snap_eps(crit, d, eps, step)
sup = build_super(crit, d, eps, step=step)
sub = build_sub(crit, d, eps, step=step, x_max=sup.x_max)
print(f"{name}: v* = {crit.v_star:.6f}, v = {sup.v:.3f} (eps = {eps:.5f}), L = {sup.wave.L:.3f}, Delta = {sup.delta:.3f}")
print("T(c+) <= c+ :", check_super_inequality(sup, d).to_json())
print("T(c-) >= c- :", check_sub_inequality(sub, d).to_json())

res = iterate_to_fixed_point(d, sup.v, GridConfig(step=step, x_max=sup.x_max))
print(f"fixed point after {res.iters} iterations, lattice grid: {res.lattice}")
print(f"{'x':>6s} {'c-':>12s} {'q_inf':>12s} {'c+':>12s}")
for x in np.linspace(0, sup.cutoff + 2 * sup.delta, 9):
    print(f"{x:6.2f} {sub(x):12.4e} {res.q.eval(x):12.4e} {sup(x):12.4e}")
