"""Sharper bounds for strongly convex processes.

Subtracting C t^2 leaves a convex remainder; adding back the exact weighted
moment of C t^2 lifts the lower bound and lowers the upper one.
"""

from __future__ import annotations

from raina_hh import RainaKernel, StochasticProcess, hh_check_strongly_convex

X = StochasticProcess.polynomial(["normal(0,1)", "normal(0,1)", "uniform(0.5,2)"], (-1.0, 2.0),
                                 "strongly_convex", modulus="scaled(0.5)")
r = hh_check_strongly_convex(X, RainaKernel(1.2, 0.8, 0.5), -1.0, 2.0, n_paths=1000, seed=11)
s = r.summary()
print(f"plain     : {s['mean_left']:.6f} <= {s['mean_middle']:.6f} <= {s['mean_right']:.6f}")
print(f"sharpened : {s['mean_left_corr']:.6f} <= {s['mean_middle']:.6f} <= {s['mean_right_corr']:.6f}")
print("violations:", r.violations_lm + r.violations_mr)

# a pure C t^2 process turns the sharpened chain into equalities
q = StochasticProcess.deterministic([0, 0, 1.5], (0, 1), "strongly_convex", modulus="const(1.5)")
r = hh_check_strongly_convex(q, RainaKernel(1, 1, 0), 0.0, 1.0, 1, 0)
print("1.5 t^2:", float(r.corrections[0][0]), float(r.middle[0]), float(r.corrections[1][0]))
