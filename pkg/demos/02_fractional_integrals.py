"""Left and right generalised fractional integrals of random paths.

The term-wise route uses exact monomial moments; the quadrature route
integrates the weighted kernel numerically. An independent midpoint-rule
oracle serves as a cross-check.
"""

from __future__ import annotations

from raina_hh import RainaKernel, StochasticProcess, frac_integral, rl_special_case, sample_path
from raina_hh.oracle import riemann_frac_integral

kernel = RainaKernel(1.5, 0.6, 0.8)
X = StochasticProcess.polynomial(["normal(0,1)", "uniform(-1,1)", "uniform(0,2)"], (0.0, 2.0))

for base, x, side in ((0.0, 2.0, "left"), (2.0, 0.0, "right")):
    exact = frac_integral(kernel, X, base, x, method="termwise_exact", n_paths=200, seed=7)
    quad = frac_integral(kernel, X, base, x, method="quadrature", n_paths=200, seed=7)
    gap = abs(exact.per_path_values - quad.per_path_values).max()
    print(f"{side:5s}: mean={exact.mean:.12f} var={exact.variance:.6f} max|termwise-quadrature|={gap:.1e}")

# one fixed path against the oracle
p = sample_path(StochasticProcess.deterministic([1.0, -0.5, 1.0], (0.0, 2.0)), seed=0, path_index=0)
ref = riemann_frac_integral((kernel.rho, kernel.lam, kernel.omega, kernel.sigma), p, 0.0, 2.0, 10**6)
print(f"1 - t/2 + t^2: oracle {ref:.8f}, library {frac_integral(kernel, p, 0.0, 2.0).mean:.8f}")

# omega = 0 with a one-term sequence is the Riemann-Liouville integral: I^(1/2)[1](1) = 1/Gamma(3/2)
one = StochasticProcess.deterministic([1.0], (0.0, 1.0))
print("RL I^0.5[1](1) =", frac_integral(rl_special_case(0.5), one, 0.0, 1.0).mean)
