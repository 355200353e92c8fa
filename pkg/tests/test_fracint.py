import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from raina_hh import (
    CoefficientSequence,
    DomainError,
    FracIntegralRequest,
    RainaKernel,
    StochasticProcess,
    closed_form_moment,
    eval_raina,
    frac_integral,
    frac_integral_left,
    frac_integral_right,
    moment_identity_check,
    monomial_moments,
    rl_special_case,
    sample_paths,
)
from raina_hh.oracle import riemann_frac_integral, rl_monomial
from raina_hh.process import Path, _poly_path

ONE = StochasticProcess.deterministic([1.0], (-5, 5))
ZERO = StochasticProcess.deterministic([0.0], (-5, 5))
T = StochasticProcess.deterministic([0.0, 1.0], (-5, 5))
T2 = StochasticProcess.deterministic([0.0, 0.0, 1.0], (-5, 5))


def left(kernel, X, u, x, **kw):
    return frac_integral_left(FracIntegralRequest(kernel, "left", u, x, X, **kw))


def right(kernel, X, v, x, **kw):
    return frac_integral_right(FracIntegralRequest(kernel, "right", v, x, X, **kw))


class TestExamples:
    def test_constant_collapses(self):
        est = left(rl_special_case(0.5), ONE, 0, 1)
        assert est.mean == pytest.approx(1 / math.gamma(1.5), abs=1e-14)

    def test_classical_linear(self):
        assert left(rl_special_case(1.0), T, 0, 1).mean == pytest.approx(0.5, abs=1e-15)

    def test_mittag_leffler_constant(self):
        k = RainaKernel(1, 1, 1)
        ref = math.fsum(1 / math.gamma(j + 2) for j in range(40))
        assert left(k, ONE, 0, 1).mean == pytest.approx(ref, abs=1e-12)

    def test_right_examples(self):
        assert right(rl_special_case(0.5), ONE, 1, 0).mean == pytest.approx(1 / math.gamma(1.5), abs=1e-14)
        assert right(rl_special_case(0.5), T2, 1, 0).mean == pytest.approx(0.4 / math.sqrt(math.pi), abs=1e-14)
        assert right(RainaKernel(0.4, 2.2, -0.3), ZERO, 1, 0).mean == 0.0

    def test_rl_special_case(self):
        k = rl_special_case(2.0)
        assert (k.lam, k.omega, k.sigma(0)) == (2.0, 0.0, 1.0)
        assert left(k, ONE, 0, 1).mean == pytest.approx(0.5, abs=1e-15)
        assert left(rl_special_case(0.5), T, 0, 1).mean == pytest.approx(1 / math.gamma(2.5), abs=1e-14)
        # weight identically 1 for alpha = 1
        assert eval_raina(rl_special_case(1.0), 0.0)[0] == 1.0
        with pytest.raises(DomainError):
            rl_special_case(0.0)

    def test_request_validation(self):
        with pytest.raises(DomainError):
            FracIntegralRequest(rl_special_case(1), "left", 1.0, 0.0, ONE)
        with pytest.raises(DomainError):
            FracIntegralRequest(rl_special_case(1), "right", 0.0, 1.0, ONE)
        with pytest.raises(DomainError):
            FracIntegralRequest(rl_special_case(1), "up", 0.0, 1.0, ONE)
        with pytest.raises(DomainError):
            frac_integral_right(FracIntegralRequest(rl_special_case(1), "left", 0.0, 1.0, ONE))

    def test_termwise_needs_polynomial(self):
        X = StochasticProcess.deterministic(np.exp)
        with pytest.raises(DomainError):
            left(rl_special_case(0.5), X, 0, 1, method="termwise_exact")
        est = left(rl_special_case(0.5), X, 0, 1)
        assert est.method == "quadrature"
        # I^{1/2} e^t from 0 to 1 = e * erf(1)
        assert est.mean == pytest.approx(math.e * math.erf(1.0), rel=1e-9)


class TestMoments:
    @pytest.mark.parametrize("side", ["left", "right"])
    def test_identity_examples(self, side):
        k = RainaKernel(1.0, 1.0, 0.0, CoefficientSequence((1.0,), None, 1.0))
        lhs, rhs = moment_identity_check(k, 0, 1, 1, side)
        assert lhs == pytest.approx(0.5) and rhs == pytest.approx(0.5)
        lhs, rhs = moment_identity_check(k, 0, 1, 2, side)
        assert lhs == pytest.approx(1 / 3) and rhs == pytest.approx(1 / 3)

    def test_p0_is_definition(self):
        k = RainaKernel(0.6, 1.4, 0.8, CoefficientSequence.harmonic())
        f = eval_raina(k, 0.8 * 2.5**0.6, lambda_override=2.4)[0]
        assert closed_form_moment(k, -1, 1.5, 0) == pytest.approx(2.5**1.4 * f, rel=1e-14)
        lhs, rhs = moment_identity_check(k, -1, 1.5, 0)
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))

    def test_closed_forms_match_termwise(self):
        k = RainaKernel(1.7, 0.45, -0.9, CoefficientSequence.geometric(0.7))
        u, v = -0.7, 1.6
        mom_l = monomial_moments(k, "left", u, v, 2)
        mom_r = monomial_moments(k, "right", v, u, 2)
        for p in range(3):
            assert closed_form_moment(k, u, v, p, "left") == pytest.approx(mom_l[p], rel=1e-12, abs=1e-13)
            assert closed_form_moment(k, u, v, p, "right") == pytest.approx(mom_r[p], rel=1e-12, abs=1e-13)

    def test_bad_degree(self):
        with pytest.raises(DomainError):
            closed_form_moment(rl_special_case(1), 0, 1, 3)


def random_kernel(rng):
    return RainaKernel(rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(-1, 1), CoefficientSequence.harmonic())


class TestInvariants:
    def test_rl_monomials(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a = rng.uniform(0.2, 3)
            u = rng.uniform(-2, 1)
            x = u + rng.uniform(0.1, 2)
            mom = monomial_moments(rl_special_case(a), "left", u, x, 4)
            shifted = [rl_monomial(a, m, u, x) for m in range(5)]
            # t^m expanded about u recovers the shifted monomials
            for m in range(5):
                expect = math.fsum(math.comb(m, j) * u ** (m - j) * shifted[j] for j in range(m + 1))
                assert mom[m] == pytest.approx(expect, rel=1e-9, abs=1e-12)

    def test_linearity(self):
        k = RainaKernel(0.9, 0.6, 0.7, CoefficientSequence.harmonic())
        X = _poly_path([1, -2, 0.5, 0.3], 0, 0, (-2, 2))
        Y = _poly_path([0.2, 1, -1], 0, 0, (-2, 2))
        Z = _poly_path(2.5 * X.coeffs + np.pad(-1.5 * Y.coeffs, (0, 1)), 0, 0, (-2, 2))
        jx, jy, jz = (frac_integral(k, p, -1.5, 1.0, method="termwise_exact").mean for p in (X, Y, Z))
        assert jz == pytest.approx(2.5 * jx - 1.5 * jy, rel=1e-14, abs=1e-14)

    def test_mirror_symmetry(self):
        k = RainaKernel(1.2, 0.7, 0.5, CoefficientSequence.harmonic())
        u, v = -0.5, 1.5
        # X even about the midpoint 0.5
        X = _poly_path([0.25 + 1, -1, 1], 0, 0, (u, v))
        assert frac_integral(k, X, u, v).mean == pytest.approx(frac_integral(k, X, v, u).mean, rel=1e-13)
        # general X: right integral at x equals left integral of the reflected path at u+v-x
        Y = _poly_path([0.3, -1.2, 0.4, 0.7], 0, 0, (u, v))
        Yr = Path(lambda t: Y(u + v - t), 0, 0, (u, v))
        x = 0.2
        assert frac_integral(k, Y, v, x, method="quadrature").mean == pytest.approx(
            frac_integral(k, Yr, u, u + v - x, method="quadrature").mean, rel=1e-9)

    def test_positivity(self):
        rng = np.random.default_rng(2)
        X = StochasticProcess.polynomial(["uniform(0,1)", "const(0)", "uniform(0,2)"], (-2, 2), "convex")
        for _ in range(20):
            k = RainaKernel(rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0, 1))
            u, v = np.sort(rng.uniform(-2, 2, 2))
            for est in (frac_integral(k, X, u, v, n_paths=5, seed=1), frac_integral(k, X, v, u, n_paths=5, seed=1)):
                assert np.all(est.per_path_values >= 0)

    def test_termwise_vs_quadrature_vs_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(12):
            k = random_kernel(rng)
            u, v = np.sort(rng.uniform(-2, 2, 2))
            p = _poly_path(rng.normal(size=rng.integers(1, 6)), 0, 0, (-2, 2))
            for base, x in ((u, v), (v, u)):
                exact = frac_integral(k, p, base, x, method="termwise_exact").mean
                quad = frac_integral(k, p, base, x, method="quadrature").mean
                assert quad == pytest.approx(exact, rel=1e-7, abs=1e-12)
                ref = riemann_frac_integral((k.rho, k.lam, k.omega, k.sigma), p, base, x, 10**5)
                assert abs(exact - ref) <= 1e-3 * max(1.0, abs(ref))

    @settings(max_examples=25, deadline=None)
    @given(
        rho=st.floats(0.2, 3), lam=st.floats(0.2, 3), omega=st.floats(-1, 1),
        u=st.floats(-2, 1.9), width=st.floats(0.05, 2), c=st.lists(st.floats(-3, 3), min_size=1, max_size=5),
    )
    def test_property_termwise_matches_quadrature(self, rho, lam, omega, u, width, c):
        k = RainaKernel(rho, lam, omega)
        v = min(u + width, 2.0)
        p = _poly_path(c, 0, 0, (-2, 2))
        for base, x in ((u, v), (v, u)):
            exact = frac_integral(k, p, base, x, method="termwise_exact").mean
            quad = frac_integral(k, p, base, x, method="quadrature").mean
            scale = sum(abs(ci) * 2**i for i, ci in enumerate(c)) * (v - u) ** lam
            assert abs(quad - exact) <= 1e-7 * max(abs(exact), 1e-3 * scale) + 1e-13

    def test_process_estimate(self):
        X = StochasticProcess.polynomial(["normal(0,1)", "uniform(0,1)"], (0, 1), "convex")
        est = frac_integral(rl_special_case(1.0), X, 0, 1, n_paths=30, seed=4)
        paths = sample_paths(X, 4, 30)
        assert np.allclose(est.per_path_values, [p.coeffs[0] + p.coeffs[1] / 2 for p in paths], atol=1e-15)
