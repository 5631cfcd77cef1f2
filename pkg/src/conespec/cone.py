"""Spectral invariants of model-cone operators.

Heat kernel and zeta function of the one-dimensional model operator L_p,
operator-valued zeta/eta functions assembled from cross-section spectra,
their residues at the origin, small-time heat-trace expansions, and the
spectral side of the index formula for first-order cone operators.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .sal import ExpansionReport, ReportTerm
from .specfun import (
    DirichletSeriesProvider,
    SpecfunError,
    _is_nonpositive_integer,
    _poly_eval,
    b_pos_fraction,
    bessel_i_scaled,
    digamma,
    gamma,
    gamma_ratio_expansion,
    hurwitz_zeta,
    log_gamma,
    rgamma,
)

SQRT_PI = math.sqrt(math.pi)

__all__ = [
    "ConeError",
    "SpectralDatum",
    "CrossSectionSpectrum",
    "FirstOrderSpectrum",
    "ShiftedIntegerEtaProvider",
    "heat_kernel_lp",
    "k_trace_lp",
    "k_trace_operator",
    "zeta_hat_lp",
    "zeta_hat_operator",
    "zeta_hat_operator_report",
    "gamma_zeta_hat",
    "residues_at_zero",
    "eta_alpha_constant",
    "eta_function_scalable",
    "eta_hat_residues",
    "index_first_order",
    "scalar_interior_coefficients",
    "heat_trace_expansion",
    "laurent_fit",
]


class ConeError(Exception):
    pass


# ---------------------------------------------------------------------------
# Model heat kernel
# ---------------------------------------------------------------------------


def heat_kernel_lp(p: float, t: float, x: float, y: float) -> float:
    """Heat kernel of L_p on the half line at (x, y), time t.

    Evaluated through the exponentially prefactored Bessel function, so the
    only surviving exponential is exp(-(x-y)^2/4t); safe for small t.
    """
    if t <= 0 or x <= 0 or y <= 0:
        raise ConeError("t, x, y must be positive")
    z = x * y / (2.0 * t)
    return (
        math.sqrt(x * y)
        / (2.0 * t)
        * bessel_i_scaled(p, z)
        * math.exp(-((x - y) ** 2) / (4.0 * t))
    )


def k_trace_lp(p: float, t: float) -> float:
    """Fiber trace k(t) = heat kernel of L_p on the diagonal at x=1."""
    if t <= 0:
        raise ConeError("t must be positive")
    z = 1.0 / (2.0 * t)
    return z * bessel_i_scaled(p, z)


def zeta_hat_lp(p: float, s: complex) -> complex:
    """Closed form of the regularized zeta function of L_p."""
    if p <= -1:
        raise ConeError("p must exceed -1")
    s = complex(s)
    if _is_nonpositive_integer(s - 0.5) or _is_nonpositive_integer(p + 1 - s):
        raise ConeError(f"pole of zeta_hat(L_p) at s={s}")
    if _is_nonpositive_integer(s) or _is_nonpositive_integer(p + s):
        # a reciprocal-Gamma zero with no compensating pole
        return 0.0 + 0.0j
    return (
        cmath.exp(
            log_gamma(s - 0.5)
            + log_gamma(p + 1 - s)
            - log_gamma(s)
            - log_gamma(p + s)
        )
        / (2.0 * SQRT_PI)
    )


# ---------------------------------------------------------------------------
# Cross-section spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralDatum:
    """One eigenvalue of the cross-section operator with its weight.

    The weight is the multiplicity, or the trace of the group action on the
    eigenspace in the equivariant case.
    """

    eigenvalue: float
    weight: complex

    def validate_non_equivariant(self) -> None:
        if abs(self.weight.imag) > 0 or self.weight.real < 0:
            raise ConeError(
                "non-equivariant weights must be real and nonnegative"
            )

    def to_json_dict(self) -> dict:
        return {
            "lambda": self.eigenvalue,
            "weight_re": complex(self.weight).real,
            "weight_im": complex(self.weight).imag,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SpectralDatum":
        return cls(
            eigenvalue=float(d["lambda"]),
            weight=complex(float(d.get("weight_re", 1.0)), float(d.get("weight_im", 0.0))),
        )


def _match_terms(data, provider, tol=1e-9):
    """Split data into provider-matched and unmatched entries.

    The provider enumerates (weight, value) pairs of the full series; data
    entries are matched by value and must then agree in weight.  Entries the
    provider does not list stand on their own.
    """
    if provider is None or not data:
        return [], list(data)
    v_max = max(abs(d.eigenvalue) for d in data)
    remaining = list(provider.terms_below(v_max * (1 + 1e-9) + 1e-12))
    matched, unmatched = [], []
    for d in data:
        hit = None
        for i, (w, v) in enumerate(remaining):
            if abs(v - abs(d.eigenvalue)) <= tol * max(1.0, abs(d.eigenvalue)):
                hit = i
                break
        if hit is None:
            unmatched.append(d)
        else:
            w, v = remaining.pop(hit)
            matched.append(d)
    return matched, unmatched


@dataclass(frozen=True)
class CrossSectionSpectrum:
    """Explicit low spectrum of A plus a Dirichlet-series continuation.

    `tail` carries the zeta function of A (in the eigenvalue variable); where
    its enumeration overlaps `data` the two must agree, and `data` may extend
    below or beyond it.  `negative_below` selects the negative Bessel order
    -sqrt(lambda) for eigenvalues under the threshold; `p_overrides` pins the
    order per entry instead.
    """

    data: tuple[SpectralDatum, ...]
    tail: Optional[DirichletSeriesProvider] = None
    negative_below: float = 0.0
    p_overrides: Optional[tuple[Optional[float], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.data))
        if self.p_overrides is not None and len(self.p_overrides) != len(self.data):
            raise ConeError("p_overrides must align with data")
        for i, d in enumerate(self.data):
            if d.eigenvalue < 0:
                raise ConeError("cross-section eigenvalues must be nonnegative")
            if self.p_of(i) <= -1:
                raise ConeError(
                    f"Bessel order p={self.p_of(i)} <= -1 at eigenvalue {d.eigenvalue}"
                )

    def p_value(self, lam: float) -> float:
        root = math.sqrt(lam)
        return -root if lam < self.negative_below else root

    def p_of(self, i: int) -> float:
        if self.p_overrides is not None and self.p_overrides[i] is not None:
            return self.p_overrides[i]
        return self.p_value(self.data[i].eigenvalue)

    def _unmatched(self):
        _, unmatched = _match_terms(self.data, self.tail)
        return unmatched

    # -- zeta of A (eigenvalue variable), data and tail combined ------------

    def zeta_a(self, z: complex) -> complex:
        total = self.tail.zeta(z) if self.tail is not None else 0.0 + 0.0j
        for d in self._unmatched():
            if d.eigenvalue > 0:
                total += d.weight * complex(d.eigenvalue) ** (-complex(z))
        return total

    def res1_zeta_a(self, z0: complex) -> complex:
        return self.tail.residue_at(z0) if self.tail is not None else 0.0 + 0.0j

    def res0_zeta_a(self, z0: complex) -> complex:
        total = self.tail.value_at(z0) if self.tail is not None else 0.0 + 0.0j
        for d in self._unmatched():
            if d.eigenvalue > 0:
                total += d.weight * complex(d.eigenvalue) ** (-complex(z0))
        return total

    def to_json_dict(self) -> dict:
        tail: dict
        if self.tail is None:
            tail = {"kind": "none"}
        else:
            tail = getattr(self.tail, "json_dict", {"kind": "opaque"})
        return {
            "data": [d.to_json_dict() for d in self.data],
            "tail": tail,
            "p_choice": {"negative_below": self.negative_below},
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CrossSectionSpectrum":
        from .specfun import HurwitzZetaProvider, RiemannZetaProvider

        data = tuple(SpectralDatum.from_json_dict(e) for e in d.get("data", []))
        tail_spec = d.get("tail", {"kind": "none"})
        kind = tail_spec.get("kind", "none")
        tail: Optional[DirichletSeriesProvider]
        if kind == "none":
            tail = None
        elif kind == "riemann":
            # eigenvalues j^e with weight `scale`
            tail = RiemannZetaProvider(
                scale=float(tail_spec.get("scale", 1.0)),
                exponent=float(tail_spec.get("exponent", 2.0)),
            )
        elif kind == "hurwitz":
            tail = HurwitzZetaProvider(
                a=float(tail_spec["a"]),
                scale=float(tail_spec.get("scale", 1.0)),
                exponent=float(tail_spec.get("exponent", 2.0)),
            )
        else:
            raise ConeError(f"unknown tail kind {kind!r}")
        if tail is not None:
            tail.json_dict = dict(tail_spec)
        p_choice = d.get("p_choice", {})
        return cls(
            data=data,
            tail=tail,
            negative_below=float(p_choice.get("negative_below", 0.0)),
        )


# ---------------------------------------------------------------------------
# Operator zeta function
# ---------------------------------------------------------------------------


def _gamma_quotient(p: float, s: complex) -> complex:
    """Gamma(p+1-s) / Gamma(p+s)."""
    if _is_nonpositive_integer(p + 1 - s):
        raise ConeError(f"Gamma pole in the quotient at p={p}, s={s}")
    if _is_nonpositive_integer(p + s):
        return 0.0 + 0.0j
    return cmath.exp(log_gamma(p + 1 - s) - log_gamma(p + s))


def _phi_pieces(spec: CrossSectionSpectrum, s: complex, order: int, head_threshold: float):
    """Head/tail decomposition of the Gamma-quotient sum over the spectrum.

    Returns (head_value, tail_terms) where tail_terms lists the successive
    Q_k corrections; their last magnitude is the truncation error estimate.
    """
    s = complex(s)
    provider = spec.tail
    lam_head = head_threshold * head_threshold
    if spec.data:
        lam_head = max(lam_head, max(d.eigenvalue for d in spec.data))
    head = (
        list(provider.terms_below(lam_head * (1 + 1e-9) + 1e-12))
        if provider is not None
        else []
    )
    remaining = list(head)
    explicit = []  # (weight, order p)
    for i, d in enumerate(spec.data):
        hit = None
        for j, (w, lam) in enumerate(remaining):
            if abs(lam - d.eigenvalue) <= 1e-9 * max(1.0, d.eigenvalue):
                hit = j
                break
        if hit is not None:
            w, lam = remaining.pop(hit)
            if abs(w - d.weight) > 1e-9 * (1.0 + abs(d.weight)):
                raise ConeError(
                    f"tail provider disagrees with data weight at lambda={d.eigenvalue}"
                )
        explicit.append((d.weight, spec.p_of(i)))
    for w, lam in remaining:
        explicit.append((w, math.sqrt(lam)))

    head_value = sum(w * _gamma_quotient(p, s) for w, p in explicit)

    tail_terms = []
    if provider is not None:
        exp_ = gamma_ratio_expansion(order)
        for k in range(order + 1):
            qk = exp_.q_polys[k]
            if not qk:
                continue
            z = (2 * s - 1 + k) / 2.0
            if provider.is_pole(z):
                raise ConeError(f"tail provider pole hit at argument {z}")
            tz = provider.zeta(z) - sum(
                w * complex(lam) ** (-z) for w, lam in head
            )
            tail_terms.append(_poly_eval(qk, s) * tz)
    return head_value, tail_terms


def zeta_hat_operator(
    spec: CrossSectionSpectrum,
    s: complex,
    order: int = 6,
    head_threshold: float = 8.0,
) -> complex:
    """Regularized zeta function of the cone operator with cross-section spectrum `spec`.

    Enumerated eigenvalues (and provider terms below the head threshold) are
    summed with exact Gamma quotients; the remainder is folded through the
    provider's continuation against the Gamma-ratio asymptotics.
    """
    s = complex(s)
    if _is_nonpositive_integer(s - 0.5):
        raise ConeError(f"pole of the zeta function at s={s}")
    head_value, tail_terms = _phi_pieces(spec, s, order, head_threshold)
    phi = head_value + sum(tail_terms)
    return gamma(s - 0.5) * rgamma(s) / (2.0 * SQRT_PI) * phi


def zeta_hat_operator_report(
    spec: CrossSectionSpectrum,
    s: complex,
    order: int = 6,
    head_threshold: float = 8.0,
) -> dict:
    """Value plus a truncation-error estimate (magnitude of the last tail term)."""
    s = complex(s)
    head_value, tail_terms = _phi_pieces(spec, s, order, head_threshold)
    pref = gamma(s - 0.5) * rgamma(s) / (2.0 * SQRT_PI)
    value = pref * (head_value + sum(tail_terms))
    err = abs(pref) * (abs(tail_terms[-1]) if tail_terms else 0.0)
    return {"value": value, "error_estimate": err}


def gamma_zeta_hat(spec: CrossSectionSpectrum, s: complex, order: int = 6) -> complex:
    return gamma(complex(s)) * zeta_hat_operator(spec, s, order=order)


# ---------------------------------------------------------------------------
# Residues at the origin
# ---------------------------------------------------------------------------


def residues_at_zero(
    spec: CrossSectionSpectrum, j_max: int = 6
) -> tuple[complex, complex]:
    """Laurent coefficients (Res_1, Res_0) of Gamma(s) * zeta_hat at s=0.

    Assembled from the residues and finite parts of the zeta function of A at
    the half-integers, the Bernoulli-weighted pole sum, and the correction
    from eigenvalues carrying a negative Bessel order.
    """
    r1_half = spec.res1_zeta_a(-0.5)
    r0_half = spec.res0_zeta_a(-0.5)
    res1 = -r1_half
    # Gamma'(-1/2) / (2 sqrt(pi)) = -psi(-1/2)
    res0 = -digamma(-0.5) * r1_half - r0_half
    for j in range(1, j_max + 1):
        bj = float(b_pos_fraction(j))
        res0 += (-1) ** j * bj / j * spec.res1_zeta_a(j - 0.5)
    i_zero = 0.0 + 0.0j
    for i, d in enumerate(spec.data):
        p = spec.p_of(i)
        if p < 0:
            i_zero += 2.0 * p * d.weight
    res0 -= i_zero
    return res1, res0


# ---------------------------------------------------------------------------
# First-order operators: eta function and index
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _eta_alpha_fraction(k: int) -> Fraction:
    """Rational part of the universal eta-residue constant, k >= 1.

    Generated from the spectral-shift bookkeeping at shift 1/2: the direct
    log-derivative sum plus the Bernoulli cross terms picked up by the
    half-integer poles.
    """
    eps = Fraction(1, 2)
    total = -2 * eps ** (2 * k + 1) / Fraction((2 * k + 1) * 2 * k)
    for j in range(1, k + 1):
        total -= (
            (-1) ** j
            * b_pos_fraction(j)
            / j
            * eps ** (2 * (k - j) + 1)
            * math.comb(2 * k - 1, 2 * (k - j) + 1)
        )
    return total


def eta_alpha_constant(k: int) -> float:
    """Universal constant multiplying Res_1 eta(2k) in the eta residue at 0."""
    if k < 0:
        raise ConeError("k must be >= 0")
    if k == 0:
        return 1.0 - digamma(-0.5) / 2.0
    return float(_eta_alpha_fraction(k))


class ShiftedIntegerEtaProvider(DirichletSeriesProvider):
    """Signed series for the symmetric operator with spectrum {n + a : n in Z}.

    eta(s) = zeta_H(s, a) - zeta_H(s, 1-a) for 0 < a < 1; the two Hurwitz
    poles at s=1 cancel, so the continuation is entire.
    """

    def __init__(self, a: float):
        if not 0 < a < 1:
            raise ConeError("a must lie in (0, 1)")
        self.a = a

    def zeta(self, s: complex) -> complex:
        return hurwitz_zeta(s, self.a) - hurwitz_zeta(s, 1.0 - self.a)

    def term_iter(self):
        pending = []
        k = 0
        while True:
            pending.append((1.0, k + self.a))
            pending.append((-1.0, k + 1.0 - self.a))
            pending.sort(key=lambda t: t[1])
            while pending and pending[0][1] < k + min(self.a, 1.0 - self.a):
                yield pending.pop(0)
            k += 1


@dataclass(frozen=True)
class FirstOrderSpectrum:
    """Spectral data of the self-adjoint cross-section operator S.

    `s_data` lists signed eigenvalues with weights; `eta_provider` continues
    the signed series eta(S, s) (full spectrum; entries of `s_data` it does
    not enumerate are added on top).  `a_plus_tail` / `a_minus_tail` continue
    the zeta functions of (S +/- 1/2)^2 for the assembled eta route, and
    `zeta_provider` optionally carries zeta(S^2) for consistency checks.
    """

    s_data: tuple[SpectralDatum, ...]
    eta_provider: Optional[DirichletSeriesProvider] = None
    zeta_provider: Optional[DirichletSeriesProvider] = None
    a_plus_tail: Optional[DirichletSeriesProvider] = None
    a_minus_tail: Optional[DirichletSeriesProvider] = None

    def __post_init__(self):
        object.__setattr__(self, "s_data", tuple(self.s_data))

    # -- simple spectral sums ----------------------------------------------

    def kernel_weight(self) -> complex:
        return sum(
            (d.weight for d in self.s_data if d.eigenvalue == 0.0), 0.0 + 0.0j
        )

    def small_negative_weight(self) -> complex:
        return sum(
            (d.weight for d in self.s_data if -0.5 < d.eigenvalue < 0.0),
            0.0 + 0.0j,
        )

    def _eta_unmatched(self):
        class _Signed:
            def __init__(self, d):
                self.eigenvalue = abs(d.eigenvalue)
                self.weight = (1 if d.eigenvalue > 0 else -1) * d.weight

        signed = [_Signed(d) for d in self.s_data if d.eigenvalue != 0.0]
        _, unmatched = _match_terms(signed, self.eta_provider)
        return unmatched

    def eta_value(self, s: complex) -> complex:
        total = (
            self.eta_provider.zeta(s) if self.eta_provider is not None else 0.0 + 0.0j
        )
        for d in self._eta_unmatched():
            total += d.weight * complex(d.eigenvalue) ** (-complex(s))
        return total

    def eta_res1(self, s0: complex) -> complex:
        if self.eta_provider is None:
            return 0.0 + 0.0j
        return self.eta_provider.residue_at(s0)

    def eta_res0(self, s0: complex) -> complex:
        total = (
            self.eta_provider.value_at(s0)
            if self.eta_provider is not None
            else 0.0 + 0.0j
        )
        for d in self._eta_unmatched():
            total += d.weight * complex(d.eigenvalue) ** (-complex(s0))
        return total

    # -- squared-shift spectra ---------------------------------------------

    def a_plus_spectrum(self) -> CrossSectionSpectrum:
        data, overrides = [], []
        for d in self.s_data:
            lam = d.eigenvalue
            data.append(SpectralDatum((lam + 0.5) ** 2, d.weight))
            overrides.append(abs(lam + 0.5))
        return CrossSectionSpectrum(
            data=tuple(data),
            tail=self.a_plus_tail,
            p_overrides=tuple(overrides),
        )

    def a_minus_spectrum(self) -> CrossSectionSpectrum:
        data, overrides = [], []
        for d in self.s_data:
            lam = d.eigenvalue
            data.append(SpectralDatum((lam - 0.5) ** 2, d.weight))
            overrides.append(abs(lam - 0.5) if abs(lam) >= 0.5 else lam - 0.5)
        return CrossSectionSpectrum(
            data=tuple(data),
            tail=self.a_minus_tail,
            p_overrides=tuple(overrides),
        )

    def consistency_check(self, s_points=(4.0, 5.0, 6.0), n_terms: int = 4000) -> float:
        """Three-point agreement of the continuations with direct partial sums."""
        worst = 0.0
        for prov in (self.eta_provider, self.zeta_provider):
            if prov is not None:
                worst = max(worst, prov.continuation_consistency(s_points, n_terms))
        return worst


def eta_function_scalable(
    spec: FirstOrderSpectrum, s: complex, order: int = 6
) -> complex:
    """eta-hat of D = d/dx + S/x: Gamma(s) times the zeta-hat difference of D*D and DD*."""
    s = complex(s)
    plus = zeta_hat_operator(spec.a_plus_spectrum(), s, order=order)
    minus = zeta_hat_operator(spec.a_minus_spectrum(), s, order=order)
    return gamma(s) * (plus - minus)


def eta_hat_residues(
    spec: FirstOrderSpectrum, k_max: int = 6
) -> tuple[complex, complex]:
    """Laurent coefficients (Res_1, Res_0) of eta-hat at s=0.

    Expressed through eta(S): its residue and finite part at 0, the kernel
    weight, the eigenvalues in (-1/2, 0), and the universal alpha_k series
    against the residues at even integers.
    """
    r1 = spec.eta_res1(0.0)
    res1 = -0.5 * r1
    res0 = (
        eta_alpha_constant(0) * r1
        - spec.eta_res0(0.0)
        - spec.kernel_weight()
        - 2.0 * spec.small_negative_weight()
    )
    for k in range(1, k_max + 1):
        r = spec.eta_res1(2.0 * k)
        if r != 0:
            res0 += eta_alpha_constant(k) * r
    return res1, res0


def index_first_order(spec: FirstOrderSpectrum, interior_term: complex) -> complex:
    """Index of the minimal extension of d/dx + S/x with the given interior term."""
    out = (
        complex(interior_term)
        - 0.5 * (spec.eta_res0(0.0) + spec.kernel_weight())
        - spec.small_negative_weight()
    )
    for k in range(1, 7):
        r = spec.eta_res1(2.0 * k)
        if r != 0:
            out += 0.5 * eta_alpha_constant(k) * r
    return out


# ---------------------------------------------------------------------------
# Heat-trace expansion
# ---------------------------------------------------------------------------


def k_trace_operator(spec: CrossSectionSpectrum, t: float) -> complex:
    """Fiber heat trace summed over the enumerated spectrum (finite data only)."""
    if spec.tail is not None:
        raise ConeError("fiber trace needs a finite spectrum")
    return sum(
        (d.weight * k_trace_lp(spec.p_of(i), t) for i, d in enumerate(spec.data)),
        0.0 + 0.0j,
    )


def scalar_interior_coefficients(
    spec: CrossSectionSpectrum,
    nu: float,
    mu: float,
    m: int,
    n_terms: int,
    t_lo: float = 1e-5,
    t_hi: float = 1e-3,
    n_samples: int = 48,
) -> tuple[tuple[complex, ...], float]:
    """Interior coefficients b_n fitted from the fiber trace.

    Least-squares fit of k(t) against the powers t^((n-m)/mu) on a log grid;
    returns the coefficients and the (column-scaled) condition number.
    """
    ts = np.logspace(math.log10(t_lo), math.log10(t_hi), n_samples)
    A = np.empty((n_samples, n_terms), dtype=float)
    for n in range(n_terms):
        A[:, n] = ts ** ((n - m) / mu)
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    As = A / scale
    rhs = np.array([k_trace_operator(spec, float(t)) for t in ts], dtype=complex)
    sol, *_ = np.linalg.lstsq(As, rhs, rcond=None)
    cond = float(np.linalg.cond(As))
    coeffs = tuple(complex(c) for c in sol / scale)
    return coeffs, cond


def heat_trace_expansion(
    spec: CrossSectionSpectrum,
    nu: float,
    mu: float,
    m: int,
    phi_moments: Sequence[complex],
    b_coeffs: Optional[Sequence[complex]] = None,
) -> ExpansionReport:
    """Small-time expansion of the localized heat trace.

    Power terms b_n * (regularized phi moment) * t^((n-m)/mu), the constant
    (1/nu) Res_0(Gamma zeta_hat)(0), and the log term -(1/nu) b_m log t.
    `phi_moments[n]` is the regularized integral of phi(x) x^((nu/mu)(m-n)-1);
    with `b_coeffs` omitted the b_n are fitted from the fiber trace.
    """
    n_terms = len(phi_moments)
    if b_coeffs is None:
        b_coeffs, _ = scalar_interior_coefficients(spec, nu, mu, m, max(n_terms, m + 1))
    if len(b_coeffs) <= m:
        raise ConeError("b coefficients must reach index m")
    terms = []
    for n in range(n_terms):
        coef = complex(b_coeffs[n]) * complex(phi_moments[n])
        if coef != 0:
            terms.append(
                ReportTerm(
                    exponent=(n - m) / mu,
                    log_power=0,
                    coefficient=coef,
                    provenance="boundary",
                )
            )
    _, res0 = residues_at_zero(spec)
    if res0 != 0:
        terms.append(
            ReportTerm(
                exponent=0.0, log_power=0, coefficient=res0 / nu, provenance="taylor"
            )
        )
    log_coef = -complex(b_coeffs[m]) / nu
    if log_coef != 0:
        terms.append(
            ReportTerm(
                exponent=0.0,
                log_power=1,
                coefficient=log_coef,
                provenance="log-correction",
            )
        )
    return ExpansionReport(
        variable="t",
        terms=tuple(terms),
        remainder_order=(n_terms - m) / mu,
        remainder_log_power=0,
    )


# ---------------------------------------------------------------------------
# Numeric Laurent fits
# ---------------------------------------------------------------------------


def laurent_fit(
    f: Callable[[complex], complex], s0: complex = 0.0, h: float = 1e-3
) -> tuple[complex, complex]:
    """Richardson-refined central-difference fit of (Res_1, Res_0) at a simple pole."""

    def odd(hh: float) -> complex:
        return (f(s0 + hh) - f(s0 - hh)) * hh / 2.0

    def even(hh: float) -> complex:
        return (f(s0 + hh) + f(s0 - hh)) / 2.0

    res1 = (4.0 * odd(h) - odd(2 * h)) / 3.0
    res0 = (4.0 * even(h) - even(2 * h)) / 3.0
    return res1, res0
