"""Two stochastic views of the same process.

1. Monte Carlo: grow the killed tree depth-first and stop at the first ray
   that reaches generation n. The estimate should match the deterministic
   iterate q_n(0) within its error bar.
2. Branching-selection: keep the N rightmost of 2N children each
   generation. The front moves slower than v*, by roughly
   (pi^2/2) t* Lambda''(t*) / (log N)^2.

    python3 demos/04_stochastic_checks.py
"""
import math

from killedbrw.bdsystem import measure_speed, predicted_shift
from killedbrw.critical import critical_params
from killedbrw.fixedpoint import q_n
from killedbrw.laws import BATTERY
from killedbrw.mcsim import SimConfig, estimate_qn

d = BATTERY["u3"]
crit = critical_params(d)

v = 0.5
for n in (5, 10, 20):
    est = estimate_qn(d, SimConfig(v=v, n=n, replicas=200_000, seed=n))
    print(f"q_{n}(0) at v={v}: fixed point {q_n(d, v, n).eval(0.0):.5f}, Monte Carlo {est.value:.5f} +/- {est.err:.5f}")

print(f"\nv* = {crit.v_star:.5f}")
for N, horizon in ((100, 20_000), (1000, 5000)):
    v_hat, ci = measure_speed(d, N, horizon, seed=1)
    shift = crit.v_star - v_hat
    print(f"N={N:5d}: v_N = {v_hat:.4f} +/- {ci:.4f}, shift {shift:.4f}, "
          f"shift (log N)^2 = {shift * math.log(N) ** 2:.3f}, leading-order prediction {predicted_shift(crit, N):.4f}")
