"""Special-function kernel.

Gamma-family wrappers, modified Bessel functions with a dual series /
asymptotic route, Laguerre polynomials and the l_n^(p) eigenfamily of the
Hankel transform, the Hankel transform itself (integration between Bessel
zeros with Euler acceleration of the alternating tail), exact Bernoulli
numbers, the asymptotic expansion of the Gamma ratio
Gamma(nu-s+1)/Gamma(nu+s), Hurwitz zeta by Euler-Maclaurin, and Dirichlet
series providers with meromorphic continuation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.special as sps
from scipy.integrate import quad

EULER_GAMMA = 0.5772156649015328606

MAX_RATIO_ORDER = 10


class SpecfunError(Exception):
    pass


class HankelConvergenceError(SpecfunError):
    pass


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------


def _is_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol and z.real <= 0.5 and abs(z.real - round(z.real)) <= tol


def gamma(z: complex) -> complex:
    """Gamma function; raises on the poles at 0, -1, -2, ..."""
    if _is_nonpositive_integer(z):
        raise SpecfunError(f"gamma pole at z={z}")
    out = sps.gamma(complex(z))
    if isinstance(out, complex) and abs(complex(z).imag) == 0:
        return out
    return complex(out)


def log_gamma(z: complex) -> complex:
    if _is_nonpositive_integer(z):
        raise SpecfunError(f"log_gamma pole at z={z}")
    return complex(sps.loggamma(complex(z)))


def rgamma(z: complex) -> complex:
    """1/Gamma(z); entire, zero at nonpositive integers."""
    return complex(sps.rgamma(complex(z)))


def digamma(z: complex) -> complex:
    if _is_nonpositive_integer(z):
        raise SpecfunError(f"digamma pole at z={z}")
    return complex(sps.digamma(complex(z)))


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------


def bessel_j(p: float, x: float) -> float:
    if p <= -1:
        raise SpecfunError("order must exceed -1")
    if x < 0:
        raise SpecfunError("argument must be nonnegative")
    return float(sps.jv(p, x))


def _bessel_i_series(p: float, x: float) -> float:
    """Power series sum (x/2)^(2m+p) / (m! Gamma(m+p+1)); all terms positive."""
    half = x / 2.0
    term = half**p * rgamma(p + 1).real
    total = term
    m = 0
    while True:
        m += 1
        term *= half * half / (m * (m + p))
        total += term
        if term < 1e-18 * total or m > 300:
            break
    return total


def _bessel_i_asymptotic_scaled(p: float, x: float) -> float:
    """I_p(x) e^{-x} via the large-argument series; x well past the switch."""
    mu = 4.0 * p * p
    total = 1.0
    term = 1.0
    prev = math.inf
    for m in range(1, 40):
        term *= -(mu - (2 * m - 1) ** 2) / (8.0 * m * x)
        if abs(term) >= prev:
            break
        prev = abs(term)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def _bessel_i_switch(p: float) -> float:
    # past the switch the omitted subdominant e^{-x} branch of the asymptotic
    # series is ~e^{-2x} relative, below double precision for x >= 19
    return max(19.0, p * p / 2.0 + 5.0)


def bessel_i_scaled(p: float, x: float) -> float:
    """I_p(x) * exp(-x), overflow-safe for all x > 0."""
    if p <= -1:
        raise SpecfunError("order must exceed -1")
    if x < 0:
        raise SpecfunError("argument must be nonnegative")
    if x == 0:
        return 1.0 if p == 0 else 0.0
    if x <= _bessel_i_switch(p):
        return _bessel_i_series(p, x) * math.exp(-x)
    return _bessel_i_asymptotic_scaled(p, x)


def bessel_i(p: float, x: float) -> float:
    if x > 700.0:
        raise SpecfunError("unscaled I_p overflows; use bessel_i_scaled")
    return bessel_i_scaled(p, x) * math.exp(x)


def bessel_j_zero(p: float, m: int) -> float:
    """m-th positive zero of J_p (m >= 1); McMahon start + Newton refinement."""
    if m < 1:
        raise SpecfunError("m must be >= 1")
    beta = (m + p / 2.0 - 0.25) * math.pi
    mu = 4.0 * p * p
    # McMahon expansion
    x = beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)
    for _ in range(50):
        f = sps.jv(p, x)
        fp = sps.jvp(p, x)
        step = f / fp
        x -= step
        if abs(step) < 1e-14 * max(1.0, x):
            break
    return float(x)


# ---------------------------------------------------------------------------
# Laguerre family
# ---------------------------------------------------------------------------


def laguerre(n: int, p: float, x: float) -> float:
    """Generalized Laguerre polynomial L_n^{(p)}(x) by the stable recurrence."""
    if n < 0:
        raise SpecfunError("n must be >= 0")
    if n == 0:
        return 1.0
    lm, l = 1.0, 1.0 + p - x
    for j in range(1, n):
        lm, l = l, ((2 * j + 1 + p - x) * l - (j + p) * lm) / (j + 1)
    return l


def l_fn(n: int, p: float, x: float) -> float:
    """l_n^{(p)}(x) = x^{p+1/2} e^{-x^2/2} L_n^{(p)}(x^2)."""
    if x < 0:
        raise SpecfunError("x must be >= 0")
    if x == 0:
        return 0.0 if p + 0.5 > 0 else math.inf
    return x ** (p + 0.5) * math.exp(-x * x / 2.0) * laguerre(n, p, x * x)


# ---------------------------------------------------------------------------
# Hankel transform
# ---------------------------------------------------------------------------


def _euler_accelerate(partials: Sequence[float]) -> float:
    """Euler transform applied to a sequence of partial sums."""
    row = list(partials)
    while len(row) > 1:
        row = [(row[i] + row[i + 1]) / 2.0 for i in range(len(row) - 1)]
    return row[0]


def hankel_transform(
    f: Callable[[float], float],
    p: float,
    x: float,
    cutoff: Optional[float] = None,
    tol: float = 1e-10,
    max_panels: int = 80,
) -> float:
    """(H_p f)(x) = integral_0^inf (x y)^{1/2} J_p(x y) f(y) dy.

    The y-axis is split at the scaled zeros of J_p; panels are integrated
    adaptively and the alternating panel tail is Euler-accelerated.  Raises
    HankelConvergenceError if neither plain nor accelerated summation
    stabilizes within the panel budget.
    """
    if x <= 0:
        raise SpecfunError("x must be positive")
    if p <= -1:
        raise SpecfunError("order must exceed -1")

    def integrand(y: float) -> float:
        if y == 0.0:
            return 0.0
        return math.sqrt(x * y) * sps.jv(p, x * y) * f(y)

    panels = []
    a = 0.0
    m = 1
    while True:
        b = bessel_j_zero(p, m) / x
        if cutoff is not None and b > cutoff:
            b = cutoff
        val, _ = quad(integrand, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)
        panels.append(val)
        a = b
        m += 1
        if cutoff is not None and a >= cutoff:
            break
        if len(panels) >= 6 and all(abs(v) < tol / 10 for v in panels[-3:]):
            break
        if len(panels) >= max_panels:
            partials = np.cumsum(panels)
            acc1 = _euler_accelerate(partials[-12:])
            acc2 = _euler_accelerate(partials[-13:-1])
            if abs(acc1 - acc2) < tol:
                return float(acc1)
            raise HankelConvergenceError(
                f"Hankel transform tail did not stabilize at x={x} "
                f"(last panels {panels[-3:]})"
            )
    return float(sum(panels))


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_fraction(n: int) -> Fraction:
    """Exact Bernoulli number B_n (B_1 = -1/2 convention) by the recurrence."""
    if n < 0:
        raise SpecfunError("n must be >= 0")
    if n > 120:
        raise SpecfunError("Bernoulli index too large")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2 == 1:
        return Fraction(0)
    total = Fraction(0)
    for k in range(n):
        total += math.comb(n + 1, k) * bernoulli_fraction(k)
    return -total / (n + 1)


def bernoulli(n: int) -> float:
    return float(bernoulli_fraction(n))


def b_pos_fraction(k: int) -> Fraction:
    """b_k = (-1)^(k-1) B_{2k} > 0."""
    if k < 1:
        raise SpecfunError("k must be >= 1")
    return (-1) ** (k - 1) * bernoulli_fraction(2 * k)


def b_pos(k: int) -> float:
    return float(b_pos_fraction(k))


# ---------------------------------------------------------------------------
# Gamma-ratio asymptotics
# ---------------------------------------------------------------------------
#
# Polynomials in s are tuples of Fractions (index = degree); a "series" is a
# list of such polynomials indexed by the power of w = 1/nu.


Poly = tuple[Fraction, ...]


def _poly_trim(p: Sequence[Fraction]) -> Poly:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _poly_trim(
        [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    )


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_scale(a: Poly, c: Fraction) -> Poly:
    return _poly_trim([c * x for x in a])


def _poly_pow(a: Poly, n: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(n):
        out = _poly_mul(out, a)
    return out


def _poly_eval(a: Poly, s: complex) -> complex:
    out = 0.0 + 0.0j
    for c in reversed(a):
        out = out * s + complex(Fraction(c))
    return out


def _series_add(a: list[Poly], b: list[Poly]) -> list[Poly]:
    n = max(len(a), len(b))
    return [
        _poly_add(a[i] if i < len(a) else (), b[i] if i < len(b) else ())
        for i in range(n)
    ]


def _series_mul(a: list[Poly], b: list[Poly], order: int) -> list[Poly]:
    out = [() for _ in range(order + 1)]
    for i, ai in enumerate(a):
        if i > order or not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > order or not bj:
                continue
            out[i + j] = _poly_add(out[i + j], _poly_mul(ai, bj))
    return out


def _series_exp(c: list[Poly], order: int) -> list[Poly]:
    """exp of a series with zero constant term, truncated at `order`."""
    if c and c[0]:
        raise SpecfunError("series_exp needs zero constant term")
    out = [() for _ in range(order + 1)]
    out[0] = (Fraction(1),)
    power = [(Fraction(1),)] + [()] * order
    fact = Fraction(1)
    for m in range(1, order + 1):
        power = _series_mul(power, c, order)
        fact *= m
        if all(not p for p in power):
            break
        out = _series_add(out, [_poly_scale(p, Fraction(1, 1) / fact) for p in power])
    return out[: order + 1]


def _stirling_tail_coeff(k: int) -> Fraction:
    """c_k = B_{2k} / (2k (2k-1)) of the Stirling series."""
    return bernoulli_fraction(2 * k) / (2 * k * (2 * k - 1))


def _log_gamma_shift_series(u: Poly, order: int) -> list[Poly]:
    """Series in w of log Gamma(nu(1+u w)) - [(nu-1/2) log nu - nu + const],
    dropping the log-nu and constant bookkeeping shared by both arguments.

    Concretely: (1/w + u - 1/2) log(1+u w) - u/w ... the caller combines two
    of these, so only the pieces that differ matter; we return the full
    series of (z - 1/2) log(1+u w) - z u w / (1 + ...)-free form:
        (1/w + u - 1/2) * log(1 + u w)   minus   u   (the w^0 part is kept)
    plus the Bernoulli tail  sum_k c_k (1+u w)^{1-2k} w^{2k-1}.
    """
    # log(1 + u w) = sum_{m>=1} (-1)^(m+1) u^m w^m / m
    log_series = [() for _ in range(order + 2)]
    for m in range(1, order + 2):
        log_series[m] = _poly_scale(_poly_pow(u, m), Fraction((-1) ** (m + 1), m))
    out = [() for _ in range(order + 1)]
    # (1/w) * log(1+u w): shift down one power
    for m in range(1, order + 2):
        if m - 1 <= order:
            out[m - 1] = _poly_add(out[m - 1], log_series[m])
    # (u - 1/2) * log(1+u w)
    u_half = _poly_add(u, (Fraction(-1, 2),))
    for m in range(1, order + 1):
        out[m] = _poly_add(out[m], _poly_mul(u_half, log_series[m]))
    # Bernoulli tail: sum_k c_k w^(2k-1) (1+u w)^(1-2k)
    k = 1
    while 2 * k - 1 <= order:
        ck = _stirling_tail_coeff(k)
        # (1+u w)^(1-2k) = sum_j binom(1-2k, j) u^j w^j
        for j in range(0, order - (2 * k - 1) + 1):
            binom = Fraction(1)
            for i in range(j):
                binom *= Fraction(1 - 2 * k - i, i + 1)
            out[2 * k - 1 + j] = _poly_add(
                out[2 * k - 1 + j], _poly_scale(_poly_pow(u, j), ck * binom)
            )
        k += 1
    return out


@dataclass(frozen=True)
class GammaRatioExpansion:
    """Gamma(nu-s+1)/Gamma(nu+s) = nu^(1-2s) sum_k Q_k(s) nu^-k."""

    q_polys: tuple[Poly, ...]
    r_polys: tuple[Poly, ...]  # r_polys[k] is R_k for k >= 2; entries 0,1 empty
    max_order: int

    def q(self, k: int) -> Poly:
        return self.q_polys[k]

    def validate(self) -> None:
        """Structural facts: Q_0=1, Q_1=0, the printed Q_2/R_2 anchors,
        R_k odd of degree <= k+1 with linear coefficient 2 B_k / k, and the
        even-k linear coefficient of Q_k."""
        assert self.q_polys[0] == (Fraction(1),), "Q_0 != 1"
        if self.max_order >= 1:
            assert self.q_polys[1] == (), "Q_1 != 0"
        if self.max_order >= 2:
            assert self.q_polys[2] == (
                Fraction(0), Fraction(1, 6), Fraction(-1, 2), Fraction(1, 3)
            ), "Q_2 anchor failed"
            assert self.r_polys[2] == (
                Fraction(0), Fraction(1, 6), Fraction(0), Fraction(1, 3)
            ), "R_2 anchor failed"
        for k in range(2, self.max_order + 1):
            rk = self.r_polys[k]
            assert len(rk) <= k + 2, f"deg R_{k} > {k + 1}"
            for d, c in enumerate(rk):
                if d % 2 == 0:
                    assert c == 0, f"R_{k} not odd"
            lin = rk[1] if len(rk) > 1 else Fraction(0)
            assert lin == 2 * bernoulli_fraction(k) / k, f"R_{k} linear coeff"
            if k % 2 == 0 and k >= 4:
                qlin = self.q_polys[k][1] if len(self.q_polys[k]) > 1 else Fraction(0)
                expect = 2 * (-1) ** (k // 2 - 1) * b_pos_fraction(k // 2) / k
                assert qlin == expect, f"Q_{k} linear coeff"


@lru_cache(maxsize=None)
def gamma_ratio_expansion(max_order: int) -> GammaRatioExpansion:
    """Generate the Q_k (and the odd R_k of the symmetric log-ratio).

    Built from the Stirling/Bernoulli series in exact rational arithmetic:
    log of the ratio is (1-2s) log nu + C(w), C without constant term, and
    the Q_k are the coefficients of exp(C).
    """
    if max_order > MAX_RATIO_ORDER:
        raise SpecfunError(f"max_order must be <= {MAX_RATIO_ORDER}")
    n = max_order
    s: Poly = (Fraction(0), Fraction(1))
    one_minus_s: Poly = (Fraction(1), Fraction(-1))
    minus_s: Poly = (Fraction(0), Fraction(-1))

    # ratio Gamma(nu-s+1)/Gamma(nu+s): arguments nu(1+(1-s)w), nu(1+s w)
    t1 = _log_gamma_shift_series(one_minus_s, n)
    t2 = _log_gamma_shift_series(s, n)
    c_series = [_poly_add(t1[i], _poly_scale(t2[i], Fraction(-1))) for i in range(n + 1)]
    # the w^0 coefficient is (1-s) - s = 1-2s and cancels against the
    # -(z1-z2) = -(1-2s) Stirling term; drop it
    if c_series[0] != (Fraction(1), Fraction(-2)):
        raise SpecfunError("internal: constant term of the log-ratio series")
    c_series[0] = ()
    q_series = _series_exp(c_series, n)

    # symmetric ratio Gamma(nu-s)/Gamma(nu+s): arguments nu(1-s w), nu(1+s w)
    t1s = _log_gamma_shift_series(minus_s, n)
    d_series = [_poly_add(t1s[i], _poly_scale(t2[i], Fraction(-1))) for i in range(n + 1)]
    # w^0 coefficient is -2s, cancelling -(z1-z2) = 2s ... net zero constant
    if d_series[0] != (Fraction(0), Fraction(-2)):
        raise SpecfunError("internal: constant term of the symmetric series")
    if n >= 1 and d_series[1] != (Fraction(0), Fraction(1)):
        raise SpecfunError("internal: w^1 coefficient of the symmetric series != s")
    r_polys = [(), ()] + [d_series[k] for k in range(2, n + 1)]

    exp_ = GammaRatioExpansion(tuple(q_series), tuple(r_polys), n)
    exp_.validate()
    return exp_


def evaluate_ratio(exp_: GammaRatioExpansion, nu: float, s: complex) -> complex:
    """nu^(1-2s) * sum_k Q_k(s) nu^-k."""
    if nu < 5:
        raise SpecfunError("asymptotic ratio needs nu >= 5")
    s = complex(s)
    total = 0.0 + 0.0j
    for k, qk in enumerate(exp_.q_polys):
        if qk:
            total += _poly_eval(qk, s) * nu ** (-k)
    return cmath.exp((1 - 2 * s) * math.log(nu)) * total


# ---------------------------------------------------------------------------
# Hurwitz zeta (Euler-Maclaurin)
# ---------------------------------------------------------------------------


def hurwitz_zeta(s: complex, a: float, n_direct: int = 30, n_bernoulli: int = 12) -> complex:
    """zeta(s, a) = sum_{k>=0} (a+k)^-s, continued by Euler-Maclaurin."""
    s = complex(s)
    if abs(s - 1.0) < 1e-13:
        raise SpecfunError("Hurwitz zeta pole at s=1")
    if a <= 0:
        raise SpecfunError("a must be positive")
    N = max(n_direct, int(abs(s.imag)) + 10)
    total = sum(complex(a + k) ** (-s) for k in range(N))
    aN = a + N
    total += aN ** (1 - s) / (s - 1)
    total += 0.5 * aN ** (-s)
    # sum_j B_2j/(2j)! * (s)_{2j-1} * aN^{-s-2j+1}
    poch = s  # (s)_1
    for j in range(1, n_bernoulli + 1):
        total += bernoulli(2 * j) / math.factorial(2 * j) * poch * aN ** (-s - 2 * j + 1)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return total


def riemann_zeta(s: complex) -> complex:
    return hurwitz_zeta(s, 1.0)


# ---------------------------------------------------------------------------
# Dirichlet series providers
# ---------------------------------------------------------------------------


class DirichletSeriesProvider:
    """zeta(s) = sum_j a_j nu_j^-s with an explicit meromorphic continuation.

    Subclasses implement `zeta` and `term_iter`; the pole ledger defaults to
    empty and residue/finite-part extraction to symmetric-difference fits,
    which are second-order accurate and Richardson-refined.
    """

    def zeta(self, s: complex) -> complex:
        raise NotImplementedError

    def term_iter(self):
        """Yield (weight, nu) in nondecreasing nu order."""
        raise NotImplementedError

    def terms_below(self, nu_max: float, cap: int = 100000):
        out = []
        for w, nu in self.term_iter():
            if nu > nu_max or len(out) >= cap:
                break
            out.append((w, nu))
        return out

    def pole_locations(self) -> tuple[complex, ...]:
        return ()

    def is_pole(self, s: complex, tol: float = 1e-8) -> bool:
        return any(abs(complex(s) - p) <= tol for p in self.pole_locations())

    def residue_at(self, s0: complex, h: float = 1e-3) -> complex:
        if not self.is_pole(s0, tol=1e-6):
            return 0.0

        def odd(hh: float) -> complex:
            return (self.zeta(s0 + hh) - self.zeta(s0 - hh)) * hh / 2.0

        return (4.0 * odd(h) - odd(2 * h)) / 3.0

    def value_at(self, s0: complex, h: float = 1e-3) -> complex:
        """Finite part (constant Laurent coefficient) at s0."""
        if not self.is_pole(s0, tol=1e-6):
            return self.zeta(s0)

        def even(hh: float) -> complex:
            return (self.zeta(s0 + hh) + self.zeta(s0 - hh)) / 2.0

        return (4.0 * even(h) - even(2 * h)) / 3.0

    def partial_sum(self, s: complex, n_terms: int) -> complex:
        total = 0.0 + 0.0j
        for i, (w, nu) in enumerate(self.term_iter()):
            if i >= n_terms:
                break
            total += w * complex(nu) ** (-complex(s))
        return total

    def continuation_consistency(self, s_points, n_terms: int = 4000) -> float:
        """Max |continuation - direct sum| over points in the convergence region."""
        worst = 0.0
        for s in s_points:
            direct = self.partial_sum(s, n_terms)
            worst = max(worst, abs(self.zeta(s) - direct))
        return worst


class FiniteSpectrumProvider(DirichletSeriesProvider):
    def __init__(self, pairs: Sequence[tuple[complex, float]]):
        # pairs of (weight, nu), nu > 0
        self.pairs = tuple(sorted(pairs, key=lambda t: t[1]))
        if any(nu <= 0 for _, nu in self.pairs):
            raise SpecfunError("nu values must be positive")

    def zeta(self, s: complex) -> complex:
        return sum(w * complex(nu) ** (-complex(s)) for w, nu in self.pairs)

    def term_iter(self):
        yield from self.pairs


class RiemannZetaProvider(DirichletSeriesProvider):
    """zeta(s) = scale * zeta_R(exponent * s) = sum_j scale * (j^exponent)^-s."""

    def __init__(self, scale: float = 1.0, exponent: float = 1.0):
        if exponent <= 0:
            raise SpecfunError("exponent must be positive")
        self.scale = scale
        self.exponent = exponent

    def zeta(self, s: complex) -> complex:
        return self.scale * riemann_zeta(self.exponent * complex(s))

    def term_iter(self):
        j = 1
        while True:
            yield (self.scale, float(j) ** self.exponent)
            j += 1

    def pole_locations(self):
        return (complex(1.0 / self.exponent),)

    def residue_at(self, s0, h: float = 1e-3):
        if abs(complex(s0) - 1.0 / self.exponent) <= 1e-6:
            return self.scale / self.exponent
        return 0.0

    def value_at(self, s0, h: float = 1e-3):
        if abs(complex(s0) - 1.0 / self.exponent) <= 1e-6:
            return self.scale * EULER_GAMMA
        return self.zeta(s0)


class HurwitzZetaProvider(DirichletSeriesProvider):
    """zeta(s) = scale * zeta_H(exponent*s, a) = sum_j scale*((a+j)^exponent)^-s."""

    def __init__(self, a: float, scale: float = 1.0, exponent: float = 1.0):
        if a <= 0:
            raise SpecfunError("a must be positive")
        self.a = a
        self.scale = scale
        self.exponent = exponent

    def zeta(self, s: complex) -> complex:
        return self.scale * hurwitz_zeta(self.exponent * complex(s), self.a)

    def term_iter(self):
        j = 0
        while True:
            yield (self.scale, (self.a + j) ** self.exponent)
            j += 1

    def pole_locations(self):
        return (complex(1.0 / self.exponent),)

    def residue_at(self, s0, h: float = 1e-3):
        if abs(complex(s0) - 1.0 / self.exponent) <= 1e-6:
            return self.scale / self.exponent
        return 0.0

    def value_at(self, s0, h: float = 1e-3):
        if abs(complex(s0) - 1.0 / self.exponent) <= 1e-6:
            return -self.scale * digamma(self.a)
        return self.zeta(s0)


def _complex_binom(top: complex, m: int) -> complex:
    out = 1.0 + 0.0j
    for i in range(m):
        out *= (top - i) / (i + 1)
    return out


class PowerShiftSquaredProvider(DirichletSeriesProvider):
    """zeta(s) = sum_{n>=1} ((n^gamma + delta)^2)^-s, for |delta| < 1.

    Continued by an exact head (n <= n_head) plus the binomial expansion of
    (1 + delta n^-gamma)^(-2s) against Hurwitz zeta tails.
    """

    def __init__(self, gamma_pow: float, delta: float, n_head: int = 12, m_terms: int = 26):
        if not (0 < gamma_pow):
            raise SpecfunError("gamma_pow must be positive")
        if abs(delta) >= 1:
            raise SpecfunError("|delta| must be < 1")
        self.gamma_pow = gamma_pow
        self.delta = delta
        self.n_head = n_head
        self.m_terms = m_terms

    def zeta(self, s: complex) -> complex:
        s = complex(s)
        g, d = self.gamma_pow, self.delta
        total = sum(
            (float(n) ** g + d) ** (-2 * s) for n in range(1, self.n_head + 1)
        )
        for m in range(self.m_terms + 1):
            arg = 2 * g * s + g * m
            total += (
                _complex_binom(-2 * s, m)
                * d**m
                * hurwitz_zeta(arg, float(self.n_head + 1))
            )
        return total

    def term_iter(self):
        n = 1
        while True:
            yield (1.0, (float(n) ** self.gamma_pow + self.delta) ** 2)
            n += 1

    def pole_locations(self):
        g = self.gamma_pow
        return tuple(
            complex((1 - g * m) / (2 * g)) for m in range(self.m_terms + 1)
        )

    def residue_at(self, s0, h: float = 1e-3):
        g, d = self.gamma_pow, self.delta
        for m in range(self.m_terms + 1):
            loc = (1 - g * m) / (2 * g)
            if abs(complex(s0) - loc) <= 1e-6:
                return _complex_binom(-2 * complex(loc), m) * d**m / (2 * g)
        return 0.0


# ---------------------------------------------------------------------------
# Dirichlet-series Gamma-ratio sums
# ---------------------------------------------------------------------------


def dirichlet_phi(
    provider: DirichletSeriesProvider,
    s: complex,
    n: int,
    head_threshold: float = 8.0,
) -> complex:
    """Phi(s) = sum_j a_j Gamma(nu_j - s + 1)/Gamma(nu_j + s).

    Head terms (nu_j <= head_threshold) are summed with exact Gamma
    quotients; the tail is folded through the provider's zeta continuation
    against the Q_k expansion:
        tail = sum_{k<=n} Q_k(s) [zeta(2s-1+k) - head partial sum].
    """
    s = complex(s)
    if n > MAX_RATIO_ORDER:
        raise SpecfunError(f"order must be <= {MAX_RATIO_ORDER}")
    head = provider.terms_below(head_threshold)
    total = 0.0 + 0.0j
    for w, nu in head:
        total += w * cmath.exp(log_gamma(nu - s + 1) - log_gamma(nu + s))
    exp_ = gamma_ratio_expansion(n)
    for k in range(n + 1):
        qk = exp_.q_polys[k]
        if not qk:
            continue
        arg = 2 * s - 1 + k
        if provider.is_pole(arg):
            raise SpecfunError(f"provider pole at required argument {arg}")
        tail_zeta = provider.zeta(arg) - sum(
            w * complex(nu) ** (-arg) for w, nu in head
        )
        total += _poly_eval(qk, s) * tail_zeta
    return total
