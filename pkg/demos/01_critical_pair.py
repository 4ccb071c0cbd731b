"""Critical speed of three step laws, two ways.

For a subcritical law the critical slope v* is both the tangency point of
the tilted log-Laplace transform and the infimum of theta(t)/t. The two
computations below are independent and should agree to rounding.

    python3 demos/01_critical_pair.py
"""
from killedbrw.critical import critical_params, v_star_infimum
from killedbrw.laws import BATTERY

print(f"{'law':8s} {'regime':14s} {'t*':>10s} {'v*':>12s} {'inf theta/t':>12s} {'residual':>9s}")
for name, d in BATTERY.items():
    crit = critical_params(d)
    inf = v_star_infimum(d)
    t = f"{crit.t_star:10.6f}" if crit.t_star else f"{'-':>10s}"
    res = f"{crit.residual:9.1e}" if crit.residual is not None else f"{'-':>9s}"
    print(f"{name:8s} {crit.regime.value:14s} {t} {crit.v_star:12.9f} {inf:12.9f} {res}")

# Critical and supercritical laws have no tilting parameter: v* sits at the
# top of the support and the infimum is only approached as t grows.
