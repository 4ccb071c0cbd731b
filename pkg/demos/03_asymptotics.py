"""How fast log q_inf(0) approaches its leading-order asymptote.

log q_inf(0) ~ -pi sqrt(Lambda''(t*) t* / (2 eps)) as eps -> 0, with a
correction of order log(eps). At desk scale the correction is visible: the
ratio r(eps) climbs past 1 near eps = 0.04 and only bends back towards 1
below eps = 0.01, because the correction divided by the leading term
decays like sqrt(eps) log(eps).

    python3 demos/03_asymptotics.py [law]     (about a minute)
"""
import math
import sys

from killedbrw.critical import critical_params
from killedbrw.fixedpoint import GridConfig, iterate_to_fixed_point
from killedbrw.fronts import build_sub, build_super, leading_log, snap_eps
from killedbrw.laws import BATTERY

name = sys.argv[1] if len(sys.argv) > 1 else "u3"
d = BATTERY[name]
crit = critical_params(d)
step = 1e-3

print(f"{'eps':>9s} {'q_inf(0)':>11s} {'r(eps)':>8s} {'log c-(1)/lead':>15s} {'log c+(1)/lead':>15s}")
for eps in (0.16, 0.08, 0.04, 0.02, 0.01, 0.005):
    e = snap_eps(crit, d, eps, step)
    q0 = iterate_to_fixed_point(d, crit.v_star - e, GridConfig(step=step)).q0.value
    lead = leading_log(crit, e)
    row = f"{e:9.5f} {q0:11.3e} {math.log(q0) / lead:8.4f}"
    try:
        row += f" {build_sub(crit, d, e).log_c1() / lead:15.4f} {build_super(crit, d, e).log_c1() / lead:15.4f}"
    except Exception as exc:  # fronts need small eps
        row += f"   ({type(exc).__name__})"
    print(row)
