"""Tests for cone heat kernels, zeta/eta functions, residues and heat traces."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gamma as sc_gamma

from conespec.cone import (
    ConeError,
    CrossSectionSpectrum,
    FirstOrderSpectrum,
    ShiftedIntegerEtaProvider,
    SpectralDatum,
    eta_alpha_constant,
    eta_function_scalable,
    eta_hat_residues,
    gamma_zeta_hat,
    heat_kernel_lp,
    heat_trace_expansion,
    index_first_order,
    k_trace_lp,
    k_trace_operator,
    laurent_fit,
    residues_at_zero,
    scalar_interior_coefficients,
    zeta_hat_lp,
    zeta_hat_operator,
    zeta_hat_operator_report,
)
from conespec.specfun import (
    PowerShiftSquaredProvider,
    RiemannZetaProvider,
    digamma,
)

SQRT_PI = math.sqrt(math.pi)


def circle_spectrum() -> CrossSectionSpectrum:
    """Laplacian of the unit circle: eigenvalues j^2 with weight 2."""
    return CrossSectionSpectrum(data=(), tail=RiemannZetaProvider(2.0, 2.0))


class TestHeatKernel:
    def test_dirichlet_half_line_closed_form(self):
        # at p = 1/2 the kernel is the image kernel of the Dirichlet half line
        for t in (0.05, 0.5):
            for x, y in [(0.5, 0.5), (1.0, 1.8), (2.0, 0.3)]:
                expected = (
                    math.exp(-((x - y) ** 2) / (4 * t))
                    - math.exp(-((x + y) ** 2) / (4 * t))
                ) / (2.0 * math.sqrt(math.pi * t))
                assert heat_kernel_lp(0.5, t, x, y) == pytest.approx(expected, rel=1e-12)

    def test_symmetry(self):
        assert heat_kernel_lp(2.5, 0.3, 0.7, 1.9) == pytest.approx(
            heat_kernel_lp(2.5, 0.3, 1.9, 0.7), rel=1e-13
        )

    def test_scaling_law(self):
        # K(t, x, x) = x^{-1} k(t x^{-2}) on a (t, x) grid
        for p in (0.5, 1.0, 2.5):
            for t in (1e-3, 1e-2, 0.1, 1.0):
                for x in (0.2, 1.0, 3.0):
                    lhs = heat_kernel_lp(p, t, x, x)
                    rhs = k_trace_lp(p, t / (x * x)) / x
                    assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_semigroup_property(self):
        p, t, s_, x, y = 1.0, 0.4, 0.3, 0.9, 1.4
        val, _ = quad(
            lambda z: heat_kernel_lp(p, t, x, z) * heat_kernel_lp(p, s_, z, y),
            0,
            30,
            limit=200,
        )
        assert val == pytest.approx(heat_kernel_lp(p, t + s_, x, y), rel=1e-8)

    def test_domain_guards(self):
        with pytest.raises(ConeError):
            heat_kernel_lp(0.5, -1.0, 1.0, 1.0)
        with pytest.raises(ConeError):
            k_trace_lp(0.5, 0.0)

    def test_small_time_fiber_trace(self):
        # k(t) = (4 pi t)^{-1/2} (1 - (4p^2-1) t/4 + O(t^2))
        p, t = 1.5, 1e-4
        lead = 1.0 / math.sqrt(4.0 * math.pi * t)
        expected = lead * (1.0 - (4.0 * p * p - 1.0) * t / 4.0)
        assert k_trace_lp(p, t) == pytest.approx(expected, rel=1e-6)


class TestZetaHatLp:
    def test_normalization_at_one(self):
        assert zeta_hat_lp(0.5, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_gamma_closed_form(self):
        p, s = 2.5, 1.2 + 0.3j
        expected = (
            complex(sc_gamma(s - 0.5))
            * complex(sc_gamma(p + 1 - s))
            / (complex(sc_gamma(s)) * complex(sc_gamma(p + s)))
            / (2.0 * SQRT_PI)
        )
        assert zeta_hat_lp(p, s) == pytest.approx(expected, rel=1e-12)

    def test_poles_raise(self):
        with pytest.raises(ConeError):
            zeta_hat_lp(0.5, 0.5)
        with pytest.raises(ConeError):
            zeta_hat_lp(1.0, 2.0)  # Gamma(p+1-s) pole
        with pytest.raises(ConeError):
            zeta_hat_lp(-1.5, 1.0)

    def test_trivial_zeros(self):
        assert zeta_hat_lp(0.5, 0.0) == 0.0
        assert zeta_hat_lp(0.5, -1.0) == 0.0


class TestSpectrumData:
    def test_spectral_datum_json_round_trip(self):
        d = SpectralDatum(2.25, 1.0 + 0.5j)
        d2 = SpectralDatum.from_json_dict(d.to_json_dict())
        assert d2 == d

    def test_validate_non_equivariant(self):
        SpectralDatum(1.0, 2.0).validate_non_equivariant()
        with pytest.raises(ConeError):
            SpectralDatum(1.0, -1.0).validate_non_equivariant()
        with pytest.raises(ConeError):
            SpectralDatum(1.0, 1.0 + 1.0j).validate_non_equivariant()

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ConeError):
            CrossSectionSpectrum(data=(SpectralDatum(-1.0, 1.0),))

    def test_p_overrides_must_align(self):
        with pytest.raises(ConeError):
            CrossSectionSpectrum(
                data=(SpectralDatum(1.0, 1.0),), p_overrides=(1.0, 2.0)
            )

    def test_negative_below_selects_sign(self):
        spec = CrossSectionSpectrum(
            data=(SpectralDatum(0.25, 1.0), SpectralDatum(4.0, 1.0)),
            negative_below=1.0,
        )
        assert spec.p_of(0) == pytest.approx(-0.5)
        assert spec.p_of(1) == pytest.approx(2.0)

    def test_zeta_a_union_semantics(self):
        # a datum matching the provider enumeration is not double counted
        spec = CrossSectionSpectrum(
            data=(SpectralDatum(4.0, 2.0), SpectralDatum(2.25, 1.0)),
            tail=RiemannZetaProvider(2.0, 2.0),
        )
        z = 2.0
        from conespec.specfun import riemann_zeta

        expected = 2.0 * riemann_zeta(2 * z) + 2.25 ** (-z)
        assert spec.zeta_a(z) == pytest.approx(expected, rel=1e-12)

    def test_weight_disagreement_raises(self):
        spec = CrossSectionSpectrum(
            data=(SpectralDatum(4.0, 3.0),), tail=RiemannZetaProvider(2.0, 2.0)
        )
        with pytest.raises(ConeError):
            zeta_hat_operator(spec, 1.6)

    def test_json_round_trip_with_tail(self):
        d = {
            "data": [{"lambda": 0.25, "weight_re": 1.0, "weight_im": 0.0}],
            "tail": {"kind": "riemann", "scale": 2},
            "p_choice": {"negative_below": 1.0},
        }
        spec = CrossSectionSpectrum.from_json_dict(d)
        assert spec.negative_below == 1.0
        assert spec.tail is not None and spec.tail.scale == 2.0
        d2 = spec.to_json_dict()
        assert d2["tail"]["kind"] == "riemann"
        assert CrossSectionSpectrum.from_json_dict(d2).data == spec.data

    def test_json_unknown_tail_kind(self):
        with pytest.raises(ConeError):
            CrossSectionSpectrum.from_json_dict({"data": [], "tail": {"kind": "x"}})


class TestZetaHatOperator:
    def test_single_eigenvalue_reduces_to_fiber(self):
        spec = CrossSectionSpectrum(data=(SpectralDatum(2.25, 1.5),))
        for s in (0.8, 1.3, 2.0 + 1.0j):
            assert zeta_hat_operator(spec, s) == pytest.approx(
                1.5 * zeta_hat_lp(1.5, s), rel=1e-12
            )

    def test_zero_eigenvalue_uses_order_zero(self):
        spec = CrossSectionSpectrum(data=(SpectralDatum(0.0, 1.0),))
        assert zeta_hat_operator(spec, 0.8) == pytest.approx(
            zeta_hat_lp(0.0, 0.8), rel=1e-12
        )

    def test_circle_against_partial_sums(self):
        spec = circle_spectrum()
        s = 1.6
        n_terms = 20000
        direct = sum(
            2.0 * math.exp(math.lgamma(j + 1 - s) - math.lgamma(j + s))
            for j in range(1, n_terms)
        )
        # integral estimate of the tail of the p^{1-2s} decay
        direct += 2.0 * n_terms ** (2.0 - 2.0 * s) / (2.0 * s - 2.0)
        pref = (
            sc_gamma(s - 0.5) / sc_gamma(s) / (2.0 * SQRT_PI)
        )
        assert zeta_hat_operator(spec, s) == pytest.approx(pref * direct, rel=1e-6)

    def test_head_threshold_independence(self):
        spec = circle_spectrum()
        a = zeta_hat_operator(spec, 1.6, head_threshold=8.0)
        b = zeta_hat_operator(spec, 1.6, head_threshold=20.0)
        assert a == pytest.approx(b, rel=1e-10)

    def test_provider_pole_collision_raises(self):
        with pytest.raises(ConeError):
            zeta_hat_operator(circle_spectrum(), 1.0)

    def test_pole_sampling_near_half(self):
        # (s - 1/2) zeta_hat stays bounded and stabilizes approaching the pole
        spec = circle_spectrum()
        r1 = 1e-2 * zeta_hat_operator(spec, 0.5 + 1e-2)
        r2 = 1e-3 * zeta_hat_operator(spec, 0.5 + 1e-3)
        assert abs(r2) < 10.0
        assert r1 == pytest.approx(r2, rel=0.05)

    def test_report_error_estimate(self):
        rep = zeta_hat_operator_report(circle_spectrum(), 1.6)
        assert rep["value"] == pytest.approx(
            zeta_hat_operator(circle_spectrum(), 1.6), rel=1e-13
        )
        assert 0 <= rep["error_estimate"] < 1e-6


class TestResiduesAtZero:
    def test_circle_residues_vanish(self):
        res1, res0 = residues_at_zero(circle_spectrum())
        assert abs(res1) < 1e-10
        assert abs(res0) < 1e-10

    def test_single_negative_order_eigenvalue(self):
        spec = CrossSectionSpectrum(
            data=(SpectralDatum(0.25, 1.0),), negative_below=1.0
        )
        res1, res0 = residues_at_zero(spec)
        assert res1 == pytest.approx(0.0, abs=1e-12)
        # -res0_zeta_a(-1/2) - I(0) = -sqrt(0.25) - 2(-0.5) = 0.5
        assert res0 == pytest.approx(0.5, rel=1e-12)

    def test_finite_spectrum_vs_laurent_fit(self):
        spec = CrossSectionSpectrum(
            data=(SpectralDatum(0.25, 1.0), SpectralDatum(2.25, 2.0)),
            negative_below=1.0,
        )
        res1, res0 = residues_at_zero(spec)
        fit1, fit0 = laurent_fit(lambda s: gamma_zeta_hat(spec, s))
        assert res1 == pytest.approx(fit1, abs=1e-8)
        assert res0 == pytest.approx(fit0, abs=1e-8)

    def test_power_shift_spectrum_vs_laurent_fit(self):
        spec = CrossSectionSpectrum(data=(), tail=PowerShiftSquaredProvider(1.0 / 3.0, 0.3))
        res1, res0 = residues_at_zero(spec)
        fit1, fit0 = laurent_fit(lambda s: gamma_zeta_hat(spec, s))
        assert res1 == pytest.approx(fit1, abs=1e-8)
        assert res0 == pytest.approx(fit0, abs=1e-8)


class TestEta:
    def test_alpha_constants(self):
        from fractions import Fraction

        assert eta_alpha_constant(0) == pytest.approx(1.0 - digamma(-0.5).real / 2.0)
        assert eta_alpha_constant(1) == pytest.approx(float(Fraction(1, 24)))
        assert eta_alpha_constant(2) == pytest.approx(float(Fraction(-7, 960)))
        assert eta_alpha_constant(3) == pytest.approx(float(Fraction(31, 8064)))
        with pytest.raises(ConeError):
            eta_alpha_constant(-1)

    def test_shifted_integer_provider(self):
        prov = ShiftedIntegerEtaProvider(0.25)
        # zeta_H(0, 1/4) - zeta_H(0, 3/4) = 1/2
        assert prov.zeta(0.0) == pytest.approx(0.5, rel=1e-10)
        assert prov.zeta(3.0) == pytest.approx(
            sum(
                s * abs(m + 0.25) ** -3.0
                for m in range(-200, 200)
                for s in [1.0 if m + 0.25 > 0 else -1.0]
            ),
            abs=1e-4,
        )
        with pytest.raises(ConeError):
            ShiftedIntegerEtaProvider(1.5)

    def test_symmetric_spectrum_is_eta_trivial(self):
        spec = FirstOrderSpectrum(
            s_data=(SpectralDatum(0.8, 1.0), SpectralDatum(-0.8, 1.0))
        )
        res1, res0 = eta_hat_residues(spec)
        assert abs(res1) < 1e-12
        assert abs(res0) < 1e-12
        fit1, fit0 = laurent_fit(lambda s: eta_function_scalable(spec, s))
        assert abs(fit1) < 1e-8
        assert abs(fit0) < 1e-8

    def test_kernel_weight_enters_res0(self):
        spec = FirstOrderSpectrum(s_data=(SpectralDatum(0.0, 2.0),))
        res1, res0 = eta_hat_residues(spec)
        assert res1 == pytest.approx(0.0, abs=1e-12)
        assert res0 == pytest.approx(-2.0, rel=1e-12)
        fit1, fit0 = laurent_fit(lambda s: eta_function_scalable(spec, s))
        assert res1 == pytest.approx(fit1, abs=1e-7)
        assert res0 == pytest.approx(fit0, abs=1e-7)

    def test_small_negative_eigenvalue(self):
        spec = FirstOrderSpectrum(
            s_data=(SpectralDatum(-0.3, 1.0), SpectralDatum(0.9, 1.0))
        )
        res1, res0 = eta_hat_residues(spec)
        fit1, fit0 = laurent_fit(lambda s: eta_function_scalable(spec, s))
        assert res1 == pytest.approx(fit1, abs=1e-7)
        assert res0 == pytest.approx(fit0, abs=1e-7)

    def test_alpha_series_against_compositional_fit(self):
        # spectrum n^{1/4}: eta has poles at s=4 (k=2), so alpha_2 enters
        gamma_pow = 0.25
        spec = FirstOrderSpectrum(
            s_data=(),
            eta_provider=RiemannZetaProvider(1.0, gamma_pow),
            a_plus_tail=PowerShiftSquaredProvider(gamma_pow, 0.5),
            a_minus_tail=PowerShiftSquaredProvider(gamma_pow, -0.5),
        )
        res1, res0 = eta_hat_residues(spec)
        fit1, fit0 = laurent_fit(lambda s: eta_function_scalable(spec, s))
        assert res1 == pytest.approx(fit1, abs=1e-8)
        assert res0 == pytest.approx(fit0, abs=1e-8)

    def test_consistency_check_on_providers(self):
        spec = FirstOrderSpectrum(
            s_data=(), eta_provider=ShiftedIntegerEtaProvider(0.25)
        )
        assert spec.consistency_check(s_points=(4.0, 5.0)) < 1e-6


class TestIndex:
    def test_shifted_integer_index(self):
        # spectrum Z + 1/4: eta(0) = 1/2, no kernel, no small negatives
        spec = FirstOrderSpectrum(
            s_data=(), eta_provider=ShiftedIntegerEtaProvider(0.25)
        )
        interior = 1.0
        assert index_first_order(spec, interior) == pytest.approx(
            interior - 0.25, rel=1e-10
        )

    def test_kernel_contribution(self):
        spec = FirstOrderSpectrum(s_data=(SpectralDatum(0.0, 2.0),))
        assert index_first_order(spec, 0.0) == pytest.approx(-1.0, rel=1e-12)

    def test_small_negative_contribution(self):
        spec = FirstOrderSpectrum(
            s_data=(SpectralDatum(-0.3, 1.0), SpectralDatum(0.3, 1.0))
        )
        # eta(0) cancels pairwise; only the (-1/2,0) eigenvalue counts
        assert index_first_order(spec, 0.0) == pytest.approx(-1.0, rel=1e-12)


class TestHeatTrace:
    def test_fiber_trace_needs_finite_spectrum(self):
        with pytest.raises(ConeError):
            k_trace_operator(circle_spectrum(), 0.1)

    def test_interior_coefficients_tauberian(self):
        spec = CrossSectionSpectrum(data=(SpectralDatum(1.0, 1.0),))
        coeffs, cond = scalar_interior_coefficients(spec, 2.0, 2.0, 1, 4)
        lead = 1.0 / math.sqrt(4.0 * math.pi)
        assert coeffs[0].real == pytest.approx(lead, rel=0.02)
        assert abs(coeffs[1]) < 0.02 * lead
        # second correction: -(4p^2-1)/4 * (4 pi)^{-1/2} at p = 1
        assert coeffs[2].real == pytest.approx(-0.75 * lead, rel=0.05)
        assert math.isfinite(cond)

    def test_expansion_assembly(self):
        spec = CrossSectionSpectrum(
            data=(SpectralDatum(0.25, 1.0),), negative_below=1.0
        )
        b = (0.5, 0.25, 0.125)
        moments = (2.0, 3.0, 4.0)
        rep = heat_trace_expansion(spec, 2.0, 2.0, 1, moments, b)
        assert rep.variable == "t"
        assert rep.coefficient(-0.5, 0) == pytest.approx(1.0)  # b0 * m0
        assert rep.coefficient(0.5, 0) == pytest.approx(0.5)  # b2 * m2
        # constant term: b1 * m1 + res0/nu = 0.75 + 0.25
        assert rep.coefficient(0.0, 0) == pytest.approx(1.0, rel=1e-10)
        assert rep.coefficient(0.0, 1) == pytest.approx(-b[1] / 2.0)

    def test_expansion_needs_b_up_to_m(self):
        spec = CrossSectionSpectrum(data=(SpectralDatum(1.0, 1.0),))
        with pytest.raises(ConeError):
            heat_trace_expansion(spec, 2.0, 2.0, 1, (1.0,), (0.5,))


class TestLaurentFit:
    def test_exact_on_rational_model(self):
        res1, res0 = laurent_fit(lambda s: 2.0 / s + 3.0 + 5.0 * s)
        assert res1 == pytest.approx(2.0, rel=1e-9)
        assert res0 == pytest.approx(3.0, rel=1e-9)
