import math

import pytest
from hypothesis import given, settings, strategies as st

from evitrust.errors import ConvergenceError
from evitrust.numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    find_unit_crossings,
    integrate,
    log_beta,
    log_gamma,
    regularized_incomplete_beta,
)


class TestLogGamma:
    def test_gamma_one_is_one(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-12)

    def test_gamma_five_is_factorial(self):
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-12)

    def test_half_integer_identity(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, math.inf, math.nan])
    def test_domain_errors(self, bad):
        with pytest.raises(ValueError):
            log_gamma(bad)

    def test_recurrence_small_to_large(self):
        # ln Γ(x+1) = ln Γ(x) + ln x across the supported range
        for x in (1e-3, 0.1, 2.5, 10.0, 1e3, 1e6):
            assert log_gamma(x + 1.0) == pytest.approx(
                log_gamma(x) + math.log(x), rel=1e-12, abs=1e-10
            )


class TestLogBeta:
    def test_uniform_normalizer(self):
        assert log_beta(1.0, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_integer_case_three_four(self):
        # B(3, 4) = 2!·3!/6! = 1/60
        assert log_beta(3.0, 4.0) == pytest.approx(math.log(1.0 / 60.0), abs=1e-12)

    def test_factorial_identity_integer_grid(self):
        for r in range(0, 21):
            for s in range(0, 21):
                expected = (
                    math.lgamma(r + 1) + math.lgamma(s + 1) - math.lgamma(r + s + 2)
                )
                got = log_beta(r + 1.0, s + 1.0)
                assert math.exp(got) == pytest.approx(
                    math.factorial(r) * math.factorial(s) / math.factorial(r + s + 1),
                    rel=1e-9,
                )
                assert got == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_fractional_case_vs_quadrature(self):
        # B(2.1, 1.9) = ∫ x^1.1 (1-x)^0.9 dx, checked against the quadrature oracle
        oracle = integrate(
            lambda x: x**1.1 * (1.0 - x) ** 0.9, 0.0, 1.0, Tolerance(1e-12, 40)
        )
        assert math.exp(log_beta(2.1, 1.9)) == pytest.approx(oracle, abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            log_beta(0.0, 1.0)
        with pytest.raises(ValueError):
            log_beta(1.0, -2.0)


class TestRegularizedIncompleteBeta:
    def test_endpoints(self):
        assert regularized_incomplete_beta(0.0, 3.0, 4.0) == 0.0
        assert regularized_incomplete_beta(1.0, 3.0, 4.0) == 1.0

    @pytest.mark.parametrize("a", [0.5, 1.0, 3.0, 17.5])
    def test_symmetric_midpoint(self, a):
        assert regularized_incomplete_beta(0.5, a, a) == pytest.approx(0.5, abs=1e-12)

    def test_against_quadrature(self):
        # I_0.3(3, 4) = ∫₀^0.3 x²(1-x)³ dx / B(3, 4)
        num = integrate(lambda x: x**2 * (1 - x) ** 3, 0.0, 0.3, Tolerance(1e-12, 40))
        assert regularized_incomplete_beta(0.3, 3.0, 4.0) == pytest.approx(
            num * 60.0, abs=1e-9
        )

    @given(
        x1=st.floats(0.0, 1.0),
        x2=st.floats(0.0, 1.0),
        a=st.floats(0.05, 50.0),
        b=st.floats(0.05, 50.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_x(self, x1, x2, a, b):
        lo, hi = min(x1, x2), max(x1, x2)
        assert regularized_incomplete_beta(lo, a, b) <= regularized_incomplete_beta(
            hi, a, b
        ) + 1e-12

    # x bounded away from the endpoints: closer in, 1-x itself rounds and
    # the identity is lost to representation error, not to the function
    @given(
        x=st.floats(1e-6, 1.0 - 1e-6),
        a=st.floats(0.05, 50.0),
        b=st.floats(0.05, 50.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_reflection_identity(self, x, a, b):
        lhs = regularized_incomplete_beta(x, a, b)
        rhs = regularized_incomplete_beta(1.0 - x, b, a)
        assert lhs + rhs == pytest.approx(1.0, abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            regularized_incomplete_beta(-0.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            regularized_incomplete_beta(1.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            regularized_incomplete_beta(0.5, 0.0, 1.0)


class TestIntegrate:
    def test_constant(self):
        assert integrate(lambda x: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_beta_moment(self):
        assert integrate(lambda x: x**2 * (1 - x) ** 3, 0.0, 1.0) == pytest.approx(
            1.0 / 60.0, abs=1e-9
        )

    def test_kinked_absolute_value(self):
        assert integrate(lambda x: abs(2.0 * x - 1.0), 0.0, 1.0) == pytest.approx(
            0.5, abs=1e-9
        )

    def test_empty_interval(self):
        assert integrate(lambda x: 42.0, 0.7, 0.7) == 0.0

    def test_reversed_bounds_rejected(self):
        with pytest.raises(ValueError):
            integrate(lambda x: 1.0, 1.0, 0.0)

    def test_non_convergence_carries_best_estimate(self):
        # A step at an off-grid point starves the subdivision budget.
        step = lambda x: 0.0 if x < 1.0 / math.pi else 1.0
        true_value = 1.0 - 1.0 / math.pi
        with pytest.raises(ConvergenceError) as exc_info:
            integrate(step, 0.0, 1.0, Tolerance(1e-13, 8))
        assert exc_info.value.best_estimate == pytest.approx(true_value, abs=1e-2)

    def test_fractional_power_endpoint(self):
        # x^0.151 has unbounded derivative at 0; must still converge.
        got = integrate(lambda x: x**0.151, 0.0, 1.0, DEFAULT_TOLERANCE)
        assert got == pytest.approx(1.0 / 1.151, abs=1e-8)


class TestFindUnitCrossings:
    def test_uniform_density_has_no_crossings(self):
        assert find_unit_crossings(lambda x: 0.0, 0.5) == ()

    def test_linear_density_single_crossing(self):
        # density 2x: log crosses 0 at x = 0.5, peak at 1
        log_density = lambda x: math.log(2.0 * x) if x > 0 else -math.inf
        roots = find_unit_crossings(log_density, 1.0)
        assert len(roots) == 1
        assert roots[0] == pytest.approx(0.5, abs=1e-8)

    def test_symmetric_bump_two_roots(self):
        # density of evidence <5, 5>: two roots mirrored around 0.5
        from evitrust.core import _log_pcdf

        roots = find_unit_crossings(lambda x: _log_pcdf(5.0, 5.0, x), 0.5)
        assert len(roots) == 2
        x1, x2 = roots
        assert x1 < 0.5 < x2
        assert x1 + x2 == pytest.approx(1.0, abs=1e-7)
        assert _log_pcdf(5.0, 5.0, x1) == pytest.approx(0.0, abs=1e-6)

    def test_roots_sorted_and_bracketed(self):
        from evitrust.core import _log_pcdf

        roots = find_unit_crossings(lambda x: _log_pcdf(8.0, 2.0, x), 0.8)
        assert list(roots) == sorted(roots)
        assert all(0.0 <= x <= 1.0 for x in roots)


class TestTolerance:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            Tolerance(abs_tol=0.0)
        with pytest.raises(ValueError):
            Tolerance(abs_tol=-1e-9)
        with pytest.raises(ValueError):
            Tolerance(max_subdivisions=0)
