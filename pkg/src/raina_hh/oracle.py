"""Brute-force reference values.

Nothing here imports the series or fractional-integral modules: the weight
is summed directly from its definition and integrals are plain midpoint
sums, so agreement with the fast paths is evidence rather than tautology.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np


def _direct_weight_series(rho, lam, omega, sigma, z_max):
    """Coefficients sigma(k)/Gamma(rho k + lam), summed until the terms at
    ``z_max`` are negligible (no certification, just a generous cutoff)."""
    if z_max == 0.0:
        return [sigma(0) / math.gamma(lam)]
    coefs = []
    peaked = False
    prev = -math.inf
    for k in range(5000):
        c = sigma(k) / math.exp(math.lgamma(rho * k + lam)) if rho * k + lam < 170 else 0.0
        if c == 0.0 and k > 0:
            break
        coefs.append(c)
        mag = math.log(c) + k * math.log(z_max)
        if mag < prev:
            peaked = True
        prev = mag
        if k >= 3 and peaked and mag < math.log(1e-20):
            break
    return coefs


def raina_direct(rho: float, lam: float, omega: float, sigma: Callable[[int], float], z) -> np.ndarray:
    """F^sigma_{rho,lam}(z) by summing the raw power series term by term."""
    z = np.asarray(z, dtype=float)
    coefs = _direct_weight_series(rho, lam, omega, sigma, float(np.max(np.abs(z), initial=0.0)))
    out = np.zeros_like(z)
    zk = np.ones_like(z)
    for c in coefs:
        out += c * zk
        zk = zk * z
    return out


def riemann_frac_integral(
    weight_params: tuple,
    path: Callable,
    base: float,
    x: float,
    n_nodes: int = 10**6,
) -> float:
    """Midpoint sum for the generalised fractional integral of ``path``.

    ``weight_params`` is ``(rho, lam, omega, sigma)`` with ``sigma`` a callable.
    ``x > base`` gives the left-sided integral from ``base`` to ``x``;
    ``x < base`` the right-sided one from ``x`` to ``base``. The mesh is graded
    towards the singular endpoint with exponent ``max(1, 1/lam)``.
    """
    if n_nodes < 1000:
        raise ValueError("the oracle needs at least 1000 nodes")
    rho, lam, omega, sigma = weight_params
    L = abs(x - base)
    q = max(1.0, 1.0 / lam)
    grid = L * (np.arange(n_nodes + 1) / n_nodes) ** q
    s = 0.5 * (grid[1:] + grid[:-1])
    ds = np.diff(grid)
    t = x - s if x > base else x + s
    w = s ** (lam - 1) * raina_direct(rho, lam, omega, sigma, omega * s**rho)
    vals = np.asarray(path(t), dtype=float) * np.ones_like(t)
    return float(np.sum(w * vals * ds))


def rl_monomial(alpha: float, m: int, base: float, x: float) -> float:
    """Riemann-Liouville integral of ``|t - base|**m`` taken from ``base`` to ``x``.

    Beta integral: Gamma(m+1) |x-base|**(m+alpha) / Gamma(m+1+alpha).
    """
    if m < 0:
        raise ValueError("monomial degree must be nonnegative")
    return math.exp(math.lgamma(m + 1) - math.lgamma(m + 1 + alpha)) * abs(x - base) ** (m + alpha)


def _taylor_about(coeffs: Sequence[float], c: float, sign: float) -> list[float]:
    # coefficients e_j with X(t) = sum_j e_j * (sign*(t - c))**j
    n = len(coeffs)
    out = []
    for j in range(n):
        e = sum(coeffs[i] * math.comb(i, j) * c ** (i - j) for i in range(j, n))
        out.append(e * sign**j)
    return out


def rl_polynomial(alpha: float, coeffs: Sequence[float], base: float, x: float) -> float:
    """RL integral of the polynomial ``sum coeffs[i] t**i`` from ``base`` to ``x``."""
    sign = 1.0 if x > base else -1.0
    e = _taylor_about(coeffs, base, sign)
    return math.fsum(ej * rl_monomial(alpha, j, base, x) for j, ej in enumerate(e))


def rl_hh_middle(alpha: float, coeffs: Sequence[float], u: float, v: float) -> float:
    """Middle term Gamma(alpha+1)/(2(v-u)**alpha) [I_{u+}X(v) + I_{v-}X(u)]."""
    total = rl_polynomial(alpha, coeffs, u, v) + rl_polynomial(alpha, coeffs, v, u)
    return math.gamma(alpha + 1) / (2 * (v - u) ** alpha) * total
