"""Tests for the log-power expansion algebra."""

import math

import numpy as np
import pytest

from conespec.expansions import (
    AsymptoticExpansion,
    ExpandableFunction,
    Location,
    LogPowerTerm,
    add,
    add_functions,
    certify_remainder,
    cutoff_times_monomial,
    differentiate,
    empty_expansion,
    evaluate_truncated,
    exponential_decay,
    fuchs_derivative,
    gaussian_decay,
    global_monomial,
    monomial_restricted,
    rescale_argument,
    scale_function,
    smooth_cutoff,
    smooth_step_up,
    substitute_power,
    tail_times_monomial,
    times_monomial,
)


class TestAsymptoticExpansion:
    def test_merges_nearby_exponents(self):
        e = AsymptoticExpansion(
            Location.AT_ZERO,
            (LogPowerTerm(1.0, 0.5, 0), LogPowerTerm(2.0, 0.5 + 1e-14, 0)),
            2.0,
        )
        assert len(e.terms) == 1
        assert e.coefficient(0.5, 0) == pytest.approx(3.0)

    def test_drops_zero_terms(self):
        e = AsymptoticExpansion(
            Location.AT_ZERO, (LogPowerTerm(0.0, 0.0, 0), LogPowerTerm(1.0, 1.0, 0)), 2.0
        )
        assert len(e.terms) == 1

    def test_sorted_by_real_part(self):
        e = AsymptoticExpansion(
            Location.AT_ZERO,
            (LogPowerTerm(1.0, 1.0, 0), LogPowerTerm(1.0, -0.5, 0), LogPowerTerm(1.0, 0.0, 1)),
            2.0,
        )
        exps = [t.exponent.real for t in e.terms]
        assert exps == sorted(exps)

    def test_rejects_terms_beyond_remainder_order(self):
        with pytest.raises(ValueError):
            AsymptoticExpansion(Location.AT_ZERO, (LogPowerTerm(1.0, 5.0, 0),), 2.0)
        with pytest.raises(ValueError):
            AsymptoticExpansion(Location.AT_INFINITY, (LogPowerTerm(1.0, -5.0, 0),), 2.0)

    def test_evaluate(self):
        e = AsymptoticExpansion(
            Location.AT_ZERO,
            (LogPowerTerm(2.0, -1.0, 0), LogPowerTerm(3.0, 0.0, 1)),
            1.0,
        )
        x = 0.1
        assert e.evaluate(x) == pytest.approx(2.0 / x + 3.0 * math.log(x))

    def test_evaluate_truncated_rejects_nonpositive(self):
        e = empty_expansion(Location.AT_ZERO, 2.0)
        with pytest.raises(ValueError):
            evaluate_truncated(e, 0.0)
        with pytest.raises(ValueError):
            evaluate_truncated(e, -1.0)

    def test_json_round_trip(self):
        e = AsymptoticExpansion(
            Location.AT_INFINITY,
            (LogPowerTerm(1.5 + 0.5j, -1.0 + 2.0j, 2),),
            3.0,
        )
        e2 = AsymptoticExpansion.from_json_dict(e.to_json_dict())
        assert e2.location is Location.AT_INFINITY
        assert e2.remainder_order == e.remainder_order
        assert e2.terms == e.terms


class TestLibraryFunctions:
    def test_exponential_decay_values(self):
        f = exponential_decay()
        for x in (0.1, 1.0, 3.0):
            assert f(x) == pytest.approx(math.exp(-x), rel=1e-12)
        for j in range(5):
            assert f.expansion_at_zero.coefficient(float(j), 0) == pytest.approx(
                (-1.0) ** j / math.factorial(j)
            )

    def test_gaussian_decay_derivative(self):
        g = differentiate(gaussian_decay())
        for x in (0.3, 1.2):
            assert g(x) == pytest.approx(-2.0 * x * math.exp(-x * x), rel=1e-10)

    def test_global_monomial(self):
        f = global_monomial(-1.5, 1)
        assert f.expansion_at_zero.coefficient(-1.5, 1) == pytest.approx(1.0)
        assert f.expansion_at_infinity.coefficient(-1.5, 1) == pytest.approx(1.0)
        x = 0.7
        assert f(x) == pytest.approx(x**-1.5 * math.log(x))

    def test_monomial_restricted_supports(self):
        near = monomial_restricted(-0.5, 0, support="unit_interval")
        far = monomial_restricted(-0.5, 0, support="unit_tail")
        assert near(0.5) == pytest.approx(0.5**-0.5)
        assert near(2.0) == 0.0
        assert far(0.5) == 0.0
        assert far(2.0) == pytest.approx(2.0**-0.5)
        with pytest.raises(ValueError):
            monomial_restricted(0.0, 0, support="everywhere")

    def test_cutoffs(self):
        assert smooth_cutoff(0.5) == 1.0
        assert smooth_cutoff(3.0) == 0.0
        assert 0.0 < smooth_cutoff(1.5) < 1.0
        assert smooth_step_up(0.25) == 0.0
        assert smooth_step_up(2.0) == 1.0
        # smooth transitions are monotone on a sample grid
        vals = [smooth_cutoff(x) for x in np.linspace(1.0, 2.0, 30)]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))


class TestAlgebra:
    def test_add_functions(self):
        f = add_functions(exponential_decay(), global_monomial(0.0))
        assert f(1.3) == pytest.approx(math.exp(-1.3) + 1.0)
        assert f.expansion_at_zero.coefficient(0.0, 0) == pytest.approx(2.0)

    def test_add_location_mismatch_raises(self):
        a = empty_expansion(Location.AT_ZERO, 2.0)
        b = empty_expansion(Location.AT_INFINITY, 2.0)
        with pytest.raises(ValueError):
            add(a, b)

    def test_add_takes_weaker_remainder(self):
        a = empty_expansion(Location.AT_ZERO, 2.0)
        b = empty_expansion(Location.AT_ZERO, 5.0)
        assert add(a, b).remainder_order == 2.0

    def test_scale_function(self):
        f = scale_function(exponential_decay(), 3.0)
        assert f(0.4) == pytest.approx(3.0 * math.exp(-0.4))
        assert f.expansion_at_zero.coefficient(1.0, 0) == pytest.approx(-3.0)

    def test_times_monomial(self):
        f = times_monomial(exponential_decay(), -0.5, 1)
        x = 0.8
        assert f(x) == pytest.approx(x**-0.5 * math.log(x) * math.exp(-x))
        assert f.expansion_at_zero.coefficient(-0.5, 1) == pytest.approx(1.0)
        assert f.expansion_at_zero.coefficient(0.5, 1) == pytest.approx(-1.0)

    def test_substitute_power(self):
        f = substitute_power(exponential_decay(), 2.0)
        x = 0.9
        assert f(x) == pytest.approx(math.exp(-x * x))
        assert f.expansion_at_zero.coefficient(2.0, 0) == pytest.approx(-1.0)
        with pytest.raises(ValueError):
            substitute_power(exponential_decay(), 0.0)

    def test_substitute_negative_power_swaps_locations(self):
        f = substitute_power(exponential_decay(), -1.0)
        # e^{-1/x}: flat at zero, Taylor-like in 1/x at infinity
        assert f(2.0) == pytest.approx(math.exp(-0.5))
        assert f.expansion_at_infinity.coefficient(0.0, 0) == pytest.approx(1.0)
        assert f.expansion_at_infinity.coefficient(-1.0, 0) == pytest.approx(-1.0)

    def test_substitute_power_log_factor(self):
        f = substitute_power(cutoff_times_monomial(-1.0, 1), 2.0)
        # (x^2)^{-1} log(x^2) = 2 x^{-2} log x
        assert f.expansion_at_zero.coefficient(-2.0, 1) == pytest.approx(2.0)

    def test_rescale_argument(self):
        f = rescale_argument(exponential_decay(), 2.5)
        assert f(0.7) == pytest.approx(math.exp(-1.75))
        with pytest.raises(ValueError):
            rescale_argument(exponential_decay(), -1.0)

    def test_rescale_log_binomial(self):
        lam = 3.0
        f = rescale_argument(cutoff_times_monomial(-1.0, 1), lam)
        # (lam x)^{-1} log(lam x) = lam^{-1} (x^{-1} log x + log(lam) x^{-1})
        assert f.expansion_at_zero.coefficient(-1.0, 1) == pytest.approx(1.0 / lam)
        assert f.expansion_at_zero.coefficient(-1.0, 0) == pytest.approx(
            math.log(lam) / lam
        )


class TestDerivatives:
    def test_fuchs_derivative_of_exponential(self):
        g = fuchs_derivative(exponential_decay())
        for x in (0.2, 1.0, 2.5):
            assert g(x) == pytest.approx(x * math.exp(-x), rel=1e-9)
        # -x d/dx maps a_j x^j to -j a_j x^j termwise
        for j in range(1, 4):
            assert g.expansion_at_zero.coefficient(float(j), 0) == pytest.approx(
                -j * (-1.0) ** j / math.factorial(j)
            )

    def test_differentiate_requires_flag(self):
        f = ExpandableFunction(
            lambda x: math.exp(-x),
            empty_expansion(Location.AT_ZERO, 1.0),
            empty_expansion(Location.AT_INFINITY, 1.0),
            differentiable=False,
        )
        with pytest.raises(ValueError):
            differentiate(f)

    def test_differentiate_log_term(self):
        f = cutoff_times_monomial(0.0, 1)
        e = ExpandableFunction(
            f.evaluator, f.expansion_at_zero, f.expansion_at_infinity, differentiable=True
        )
        g = differentiate(e)
        # d/dx log x = x^{-1}
        assert g.expansion_at_zero.coefficient(-1.0, 0) == pytest.approx(1.0)


class TestCertification:
    def test_certify_exponential_at_zero(self):
        # sample above the cancellation floor for a 12th-order remainder
        sup = certify_remainder(exponential_decay(), Location.AT_ZERO, lo=0.3, hi=1.0)
        assert sup <= 1.0 / math.factorial(12) * 2.0

    def test_certify_tail_monomial_at_infinity(self):
        assert certify_remainder(tail_times_monomial(-2.0), Location.AT_INFINITY) < 10.0

    def test_truncation_error_decay_rate(self):
        f = exponential_decay()
        xs = np.logspace(-3, -1, 10)
        errs = [abs(f.remainder_at_zero(float(x))) for x in xs]
        slope = np.polyfit(np.log(xs), np.log(np.maximum(errs, 1e-300)), 1)[0]
        assert slope > 10.0
