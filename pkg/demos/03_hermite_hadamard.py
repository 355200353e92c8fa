"""Hermite-Hadamard chain for convex random quadratics.

Each path must satisfy X(mid) <= weighted mean <= (X(u) + X(v)) / 2.
A deliberately misclassified concave process shows what a violation looks
like, and a negative omega shows the hypothesis flag.
"""

from __future__ import annotations

import numpy as np

from raina_hh import RainaKernel, StochasticProcess, hh_check_convex

X = StochasticProcess.polynomial(["normal(0,1)", "uniform(-2,2)", "uniform(0,3)"], (-1.0, 2.0), "convex")
rng = np.random.default_rng(1)
for _ in range(5):
    k = RainaKernel(*rng.uniform(0.3, 2.5, 2), rng.uniform(0, 1))
    r = hh_check_convex(X, k, -1.0, 2.0, n_paths=500, seed=3)
    gap_l = (r.middle - r.left).min()
    gap_r = (r.right - r.middle).min()
    print(f"rho={k.rho:.2f} lam={k.lam:.2f} omega={k.omega:.2f}: violations={r.violations_lm + r.violations_mr} "
          f"min slack left={gap_l:.3e} right={gap_r:.3e}")

concave = StochasticProcess.deterministic([0.0, 0.0, -1.0], (0.0, 1.0), "convex")
r = hh_check_convex(concave, RainaKernel(1, 1, 0), 0.0, 1.0, 1, 0)
print("-t^2 declared convex:", r.summary()["violations_lm"], "left and", r.violations_mr, "right violations")

r = hh_check_convex(StochasticProcess.deterministic([0, 0, 1.0]), RainaKernel(2, 1, -5), 0.0, 1.0, 1, 0)
print("omega=-5, rho=2: kernel nonnegative on the interval?", r.hypothesis_verified)
