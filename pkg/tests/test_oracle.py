import math

import numpy as np
import pytest

from raina_hh.oracle import raina_direct, riemann_frac_integral, rl_hh_middle, rl_monomial, rl_polynomial

ONE = lambda k: 1.0  # noqa: E731
RL = lambda a: (1.0, a, 0.0, ONE)  # noqa: E731


def test_direct_series_exponential():
    assert raina_direct(1, 1, 1, ONE, [1.0])[0] == pytest.approx(math.e, abs=1e-14)
    assert raina_direct(1, 2, 1, ONE, [1.0])[0] == pytest.approx(math.e - 1, abs=1e-14)


@pytest.mark.parametrize(
    "path, alpha, expected, n",
    [
        (lambda t: np.ones_like(t), 1.0, 1.0, 10**4),
        (lambda t: t, 1.0, 0.5, 10**4),
        (lambda t: t**2, 0.5, math.gamma(3) / math.gamma(3.5), 10**6),
    ],
)
def test_riemann_oracle_examples(path, alpha, expected, n):
    # RL weight carries 1/Gamma(alpha) through sigma(0)/Gamma(lam)
    assert riemann_frac_integral(RL(alpha), path, 0.0, 1.0, n) == pytest.approx(expected, abs=1e-4)


def test_riemann_oracle_rejects_coarse_mesh():
    with pytest.raises(ValueError):
        riemann_frac_integral(RL(1.0), lambda t: t, 0.0, 1.0, 10)


def test_rl_monomial_examples():
    assert rl_monomial(1.0, 0, 0.3, 1.3) == pytest.approx(1.0)
    assert rl_monomial(1.0, 1, 0.0, 2.0) == pytest.approx(2.0)
    assert rl_monomial(0.5, 2, 0.0, 1.0) == pytest.approx(math.gamma(3) / math.gamma(3.5))
    assert rl_monomial(0.5, 2, 1.0, 0.0) == rl_monomial(0.5, 2, 0.0, 1.0)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.7])
def test_oracle_self_consistency(alpha):
    exact = rl_monomial(alpha, 2, 0.0, 1.0)
    errs = [abs(riemann_frac_integral(RL(alpha), lambda t: t**2, 0.0, 1.0, n) - exact) for n in (10**4, 10**5)]
    assert errs[1] < 1e-4
    assert errs[0] / errs[1] >= 5


def test_rl_polynomial_both_sides():
    # X = t^2 on [0, 1], alpha = 0.5
    left = rl_polynomial(0.5, [0, 0, 1], 0.0, 1.0)
    assert left == pytest.approx(math.gamma(3) / math.gamma(3.5))
    right = rl_polynomial(0.5, [0, 0, 1], 1.0, 0.0)
    # (1/Gamma(0.5)) int_0^1 s^{-1/2} s^2 ds = 0.4 / sqrt(pi)
    assert right == pytest.approx(0.4 / math.sqrt(math.pi))
    mid = rl_hh_middle(0.5, [0, 0, 1], 0.0, 1.0)
    assert 0.25 < mid < 0.5
    assert mid == pytest.approx(math.gamma(1.5) / 2 * (left + right))
