"""Log-power asymptotic expansions at 0 and infinity.

Data model for functions f on (0, infinity) that admit finite expansions

    f(x) = sum_j a_j * x**alpha_j * log(x)**k_j  +  remainder

near an endpoint, with the remainder certified to be O(x**p) at 0 (resp.
O(x**-q) at infinity).  All values are immutable after construction; the
evaluator callables are expected to be pure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional, Sequence

EXPONENT_TOL = 1e-12
COEF_DROP_TOL = 0.0  # only exact zeros are dropped on construction


class Location(enum.Enum):
    AT_ZERO = "zero"
    AT_INFINITY = "infinity"


@dataclass(frozen=True)
class LogPowerTerm:
    """A single term a * x**alpha * log(x)**k."""

    coefficient: complex
    exponent: complex
    log_power: int = 0

    def __post_init__(self):
        if self.log_power < 0:
            raise ValueError("log_power must be >= 0")

    def evaluate(self, x: float) -> complex:
        lx = math.log(x)
        return self.coefficient * complex(x) ** self.exponent * lx**self.log_power


def _term_sort_key(location: Location):
    sgn = 1.0 if location is Location.AT_ZERO else -1.0

    def key(t: LogPowerTerm):
        return (sgn * t.exponent.real, t.exponent.imag, t.log_power)

    return key


@dataclass(frozen=True)
class AsymptoticExpansion:
    """A finite, sorted, deduplicated log-power expansion with remainder order.

    remainder_order is p at 0 (remainder O(x**p)) and q at infinity
    (remainder O(x**-q)).
    """

    location: Location
    terms: tuple[LogPowerTerm, ...]
    remainder_order: float

    def __post_init__(self):
        merged: dict[tuple[float, float, int], complex] = {}
        order: list[tuple[float, float, int]] = []
        for t in self.terms:
            key = None
            for k in merged:
                if (
                    abs(k[0] - t.exponent.real) <= EXPONENT_TOL
                    and abs(k[1] - t.exponent.imag) <= EXPONENT_TOL
                    and k[2] == t.log_power
                ):
                    key = k
                    break
            if key is None:
                key = (t.exponent.real, t.exponent.imag, t.log_power)
                order.append(key)
                merged[key] = t.coefficient
            else:
                merged[key] = merged[key] + t.coefficient
        out = [
            LogPowerTerm(c, complex(k[0], k[1]), k[2])
            for k, c in merged.items()
            if c != 0
        ]
        out.sort(key=_term_sort_key(self.location))
        for t in out:
            if self.location is Location.AT_ZERO:
                if t.exponent.real > self.remainder_order - 1 + 1e-9:
                    raise ValueError(
                        f"term exponent {t.exponent} violates Re alpha <= p-1 "
                        f"with p={self.remainder_order}"
                    )
            else:
                if t.exponent.real < -self.remainder_order - 1 - 1e-9:
                    raise ValueError(
                        f"term exponent {t.exponent} violates Re beta >= -q-1 "
                        f"with q={self.remainder_order}"
                    )
        object.__setattr__(self, "terms", tuple(out))

    # -- queries ---------------------------------------------------------

    def coefficient(self, exponent: complex, log_power: int) -> complex:
        """The stored coefficient of x**exponent * log**log_power (0 if absent)."""
        for t in self.terms:
            if (
                abs(t.exponent.real - complex(exponent).real) <= 1e-9
                and abs(t.exponent.imag - complex(exponent).imag) <= 1e-9
                and t.log_power == log_power
            ):
                return t.coefficient
        return 0.0

    def evaluate(self, x: float) -> complex:
        return sum((t.evaluate(x) for t in self.terms), 0.0 + 0.0j)

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "location": self.location.value,
            "remainder_order": float(self.remainder_order),
            "terms": [
                {
                    "re_exp": t.exponent.real,
                    "im_exp": t.exponent.imag,
                    "log_pow": t.log_power,
                    "re_coef": complex(t.coefficient).real,
                    "im_coef": complex(t.coefficient).imag,
                }
                for t in self.terms
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "AsymptoticExpansion":
        loc = Location.AT_ZERO if d["location"] == "zero" else Location.AT_INFINITY
        terms = tuple(
            LogPowerTerm(
                complex(t["re_coef"], t.get("im_coef", 0.0)),
                complex(t["re_exp"], t.get("im_exp", 0.0)),
                int(t["log_pow"]),
            )
            for t in d["terms"]
        )
        return AsymptoticExpansion(loc, terms, float(d["remainder_order"]))


def empty_expansion(location: Location, remainder_order: float) -> AsymptoticExpansion:
    return AsymptoticExpansion(location, (), remainder_order)


@dataclass(frozen=True)
class ExpandableFunction:
    """A function on (0, infinity) together with its two endpoint expansions.

    `differentiable` marks membership in the smooth-expansion subclass whose
    expansions may be differentiated termwise; `derivative` optionally supplies
    a closed-form derivative evaluator for it.
    """

    evaluator: Callable[[float], complex]
    expansion_at_zero: AsymptoticExpansion
    expansion_at_infinity: AsymptoticExpansion
    differentiable: bool = False
    derivative: Optional[Callable[[float], complex]] = None

    def __post_init__(self):
        if self.expansion_at_zero.location is not Location.AT_ZERO:
            raise ValueError("expansion_at_zero has wrong location")
        if self.expansion_at_infinity.location is not Location.AT_INFINITY:
            raise ValueError("expansion_at_infinity has wrong location")

    def __call__(self, x: float) -> complex:
        return self.evaluator(x)

    @property
    def p(self) -> float:
        return self.expansion_at_zero.remainder_order

    @property
    def q(self) -> float:
        return self.expansion_at_infinity.remainder_order

    def remainder_at_zero(self, x: float) -> complex:
        return self.evaluator(x) - self.expansion_at_zero.evaluate(x)

    def remainder_at_infinity(self, x: float) -> complex:
        return self.evaluator(x) - self.expansion_at_infinity.evaluate(x)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def evaluate_truncated(exp: AsymptoticExpansion, x: float) -> complex:
    """Sum of the stored terms coefficient * x**exponent * log(x)**log_power."""
    if x <= 0:
        raise ValueError("x must be positive")
    return exp.evaluate(x)


def _truncate_terms(
    terms: Iterable[LogPowerTerm], location: Location, order: float
) -> tuple[LogPowerTerm, ...]:
    """Drop terms the remainder of the stated order already absorbs."""
    if location is Location.AT_ZERO:
        return tuple(t for t in terms if t.exponent.real <= order - 1 + 1e-9)
    return tuple(t for t in terms if t.exponent.real >= -order - 1 - 1e-9)


def add(a: AsymptoticExpansion, b: AsymptoticExpansion) -> AsymptoticExpansion:
    """Termwise merge; remainder order is the weaker (minimum) of the two.

    Terms of the finer summand beyond the weaker order are absorbed into the
    remainder.
    """
    if a.location is not b.location:
        raise ValueError("cannot add expansions at different locations")
    order = min(a.remainder_order, b.remainder_order)
    return AsymptoticExpansion(
        a.location, _truncate_terms(a.terms + b.terms, a.location, order), order
    )


def add_functions(f: ExpandableFunction, g: ExpandableFunction) -> ExpandableFunction:
    fe, ge = f.evaluator, g.evaluator
    deriv = None
    if f.derivative is not None and g.derivative is not None:
        fd, gd = f.derivative, g.derivative
        deriv = lambda x: fd(x) + gd(x)
    return ExpandableFunction(
        lambda x: fe(x) + ge(x),
        add(f.expansion_at_zero, g.expansion_at_zero),
        add(f.expansion_at_infinity, g.expansion_at_infinity),
        differentiable=f.differentiable and g.differentiable,
        derivative=deriv,
    )


def scale_function(f: ExpandableFunction, c: complex) -> ExpandableFunction:
    fe = f.evaluator
    fd = f.derivative

    def scale_exp(e: AsymptoticExpansion) -> AsymptoticExpansion:
        return AsymptoticExpansion(
            e.location,
            tuple(replace(t, coefficient=c * t.coefficient) for t in e.terms),
            e.remainder_order,
        )

    return ExpandableFunction(
        lambda x: c * fe(x),
        scale_exp(f.expansion_at_zero),
        scale_exp(f.expansion_at_infinity),
        differentiable=f.differentiable,
        derivative=(None if fd is None else (lambda x: c * fd(x))),
    )


def substitute_power(f: ExpandableFunction, sigma: float) -> ExpandableFunction:
    """g(x) = f(x**sigma).

    Each term a x**alpha log**k maps to a*sigma**k x**(sigma*alpha) log**k;
    for sigma < 0 the endpoint expansions swap roles.
    """
    if sigma == 0:
        raise ValueError("sigma must be nonzero")
    fe = f.evaluator

    def transform(e: AsymptoticExpansion) -> tuple[tuple[LogPowerTerm, ...], float]:
        terms = tuple(
            LogPowerTerm(t.coefficient * sigma**t.log_power, sigma * t.exponent, t.log_power)
            for t in e.terms
        )
        return terms, abs(sigma) * e.remainder_order

    tz, pz = transform(f.expansion_at_zero)
    ti, qi = transform(f.expansion_at_infinity)
    if sigma > 0:
        e0 = AsymptoticExpansion(Location.AT_ZERO, tz, pz)
        ei = AsymptoticExpansion(Location.AT_INFINITY, ti, qi)
    else:
        e0 = AsymptoticExpansion(Location.AT_ZERO, ti, qi)
        ei = AsymptoticExpansion(Location.AT_INFINITY, tz, pz)
    return ExpandableFunction(
        lambda x: fe(x**sigma), e0, ei, differentiable=f.differentiable
    )


def _differentiate_expansion(e: AsymptoticExpansion) -> AsymptoticExpansion:
    out: list[LogPowerTerm] = []
    for t in e.terms:
        if t.coefficient * t.exponent != 0:
            out.append(LogPowerTerm(t.coefficient * t.exponent, t.exponent - 1, t.log_power))
        if t.log_power >= 1:
            out.append(
                LogPowerTerm(t.coefficient * t.log_power, t.exponent - 1, t.log_power - 1)
            )
    return AsymptoticExpansion(e.location, tuple(out), e.remainder_order - 1)


def differentiate(f: ExpandableFunction) -> ExpandableFunction:
    """Termwise derivative of a function carrying the smoothness certificate."""
    if not f.differentiable:
        raise ValueError("function is not marked differentiable")
    if f.derivative is not None:
        ev = f.derivative
    else:
        fe = f.evaluator

        def ev(x: float) -> complex:
            h = 1e-6 * max(x, 1e-3)
            return (fe(x + h) - fe(x - h)) / (2 * h)

    return ExpandableFunction(
        ev,
        _differentiate_expansion(f.expansion_at_zero),
        _differentiate_expansion(f.expansion_at_infinity),
        differentiable=True,
    )


def fuchs_derivative(f: ExpandableFunction) -> ExpandableFunction:
    """Df = -x f'(x), the degenerate derivative adapted to the cone axis."""
    df = differentiate(f)
    de = df.evaluator
    return ExpandableFunction(
        lambda x: -x * de(x),
        times_monomial_expansion(df.expansion_at_zero, -1.0, 1.0, 0),
        times_monomial_expansion(df.expansion_at_infinity, -1.0, 1.0, 0),
        differentiable=f.differentiable,
    )


def times_monomial_expansion(
    e: AsymptoticExpansion, c: complex, beta: complex, k: int
) -> AsymptoticExpansion:
    """Expansion of c * x**beta * log(x)**k times the expanded function."""
    terms = tuple(
        LogPowerTerm(c * t.coefficient, t.exponent + beta, t.log_power + k)
        for t in e.terms
    )
    sgn = 1.0 if e.location is Location.AT_ZERO else -1.0
    # a log factor costs an epsilon of order at the endpoint
    new_order = e.remainder_order + sgn * complex(beta).real - (0.25 if k > 0 else 0.0)
    return AsymptoticExpansion(
        e.location, _truncate_terms(terms, e.location, new_order), new_order
    )


def times_monomial(f: ExpandableFunction, beta: complex, k: int = 0) -> ExpandableFunction:
    """x |-> x**beta * log(x)**k * f(x), expansions shifted exactly."""
    fe = f.evaluator
    b = complex(beta)

    def ev(x: float) -> complex:
        return x**b * math.log(x) ** k * fe(x)

    return ExpandableFunction(
        ev,
        times_monomial_expansion(f.expansion_at_zero, 1.0, b, k),
        times_monomial_expansion(f.expansion_at_infinity, 1.0, b, k),
    )


def rescale_argument(f: ExpandableFunction, lam: float) -> ExpandableFunction:
    """x |-> f(lam * x) with the expansions rewritten in log x.

    a (lam x)**alpha log**k(lam x) expands binomially over
    log(lam x) = log lam + log x.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    fe = f.evaluator
    ll = math.log(lam)

    def transform(e: AsymptoticExpansion) -> AsymptoticExpansion:
        out = []
        for t in e.terms:
            base = t.coefficient * complex(lam) ** t.exponent
            for j in range(t.log_power + 1):
                out.append(
                    LogPowerTerm(
                        base * math.comb(t.log_power, j) * ll ** (t.log_power - j),
                        t.exponent,
                        j,
                    )
                )
        return AsymptoticExpansion(e.location, tuple(out), e.remainder_order)

    return ExpandableFunction(
        lambda x: fe(lam * x),
        transform(f.expansion_at_zero),
        transform(f.expansion_at_infinity),
        differentiable=f.differentiable,
    )


# ---------------------------------------------------------------------------
# Certification and convenience constructors
# ---------------------------------------------------------------------------


def certify_remainder(
    f: ExpandableFunction,
    location: Location,
    lo: float = 1e-6,
    hi: float = 1e-1,
    n: int = 50,
) -> float:
    """Empirical sup of |remainder| / x**(+-order) on a log-spaced grid.

    The certificate assumes the remainder is continuous on the sampled range;
    a finite return value is the stored constant of the membership invariant.
    """
    import numpy as np

    xs = np.logspace(math.log10(lo), math.log10(hi), n)
    sup = 0.0
    for x in xs:
        x = float(x)
        if location is Location.AT_ZERO:
            r = abs(f.remainder_at_zero(x)) / x**f.p
        else:
            xi = 1.0 / x
            r = abs(f.remainder_at_infinity(xi)) / xi ** (-f.q)
        sup = max(sup, r)
    return sup


def global_monomial(alpha: complex, k: int = 0, order_margin: float = 8.0) -> ExpandableFunction:
    """x**alpha * log(x)**k on all of (0, infinity); both expansions exact."""
    a = complex(alpha)

    def ev(x: float) -> complex:
        return x**a * math.log(x) ** k

    pz = a.real + 1 + order_margin
    qi = -a.real - 1 + order_margin
    term = (LogPowerTerm(1.0, a, k),)
    return ExpandableFunction(
        ev,
        AsymptoticExpansion(Location.AT_ZERO, term, pz),
        AsymptoticExpansion(Location.AT_INFINITY, term, qi),
    )


def monomial_restricted(
    alpha: complex, k: int = 0, support: str = "unit_interval", order_margin: float = 8.0
) -> ExpandableFunction:
    """x**alpha log**k x on [0,1] (support="unit_interval") or [1,inf)."""
    a = complex(alpha)
    term = (LogPowerTerm(1.0, a, k),)
    if support == "unit_interval":
        def ev(x: float) -> complex:
            return x**a * math.log(x) ** k if x <= 1.0 else 0.0
        e0 = AsymptoticExpansion(Location.AT_ZERO, term, a.real + 1 + order_margin)
        ei = empty_expansion(Location.AT_INFINITY, 40.0)
    elif support == "unit_tail":
        def ev(x: float) -> complex:
            return x**a * math.log(x) ** k if x >= 1.0 else 0.0
        e0 = empty_expansion(Location.AT_ZERO, 40.0)
        ei = AsymptoticExpansion(Location.AT_INFINITY, term, -a.real - 1 + order_margin)
    else:
        raise ValueError("support must be 'unit_interval' or 'unit_tail'")
    return ExpandableFunction(ev, e0, ei)


def exponential_decay(taylor_order: int = 12) -> ExpandableFunction:
    """e^{-x} with its Taylor expansion at 0 and empty expansion at infinity."""
    terms = tuple(
        LogPowerTerm((-1.0) ** j / math.factorial(j), float(j), 0)
        for j in range(taylor_order)
    )
    return ExpandableFunction(
        lambda x: math.exp(-x),
        AsymptoticExpansion(Location.AT_ZERO, terms, float(taylor_order)),
        empty_expansion(Location.AT_INFINITY, 40.0),
        differentiable=True,
        derivative=lambda x: -math.exp(-x),
    )


def gaussian_decay(taylor_order: int = 12) -> ExpandableFunction:
    """e^{-x^2} with its Taylor expansion at 0."""
    terms = tuple(
        LogPowerTerm((-1.0) ** m / math.factorial(m), float(2 * m), 0)
        for m in range(taylor_order // 2 + 1)
    )
    return ExpandableFunction(
        lambda x: math.exp(-(x**2)),
        AsymptoticExpansion(Location.AT_ZERO, terms, float(2 * (taylor_order // 2) + 2)),
        empty_expansion(Location.AT_INFINITY, 40.0),
        differentiable=True,
        derivative=lambda x: -2 * x * math.exp(-(x**2)),
    )


def smooth_cutoff(x: float) -> float:
    """Smooth decreasing cutoff: 1 for x <= 1, 0 for x >= 2."""
    if x <= 1.0:
        return 1.0
    if x >= 2.0:
        return 0.0
    u = x - 1.0
    g1 = math.exp(-1.0 / u)
    g2 = math.exp(-1.0 / (1.0 - u))
    return g2 / (g1 + g2)


def smooth_step_up(x: float) -> float:
    """Smooth increasing step: 0 for x <= 1/2, 1 for x >= 1."""
    if x <= 0.5:
        return 0.0
    if x >= 1.0:
        return 1.0
    u = 2.0 * (x - 0.5)
    g1 = math.exp(-1.0 / u)
    g2 = math.exp(-1.0 / (1.0 - u))
    return g1 / (g1 + g2)


def cutoff_times_monomial(alpha: complex, k: int = 0) -> ExpandableFunction:
    """phi(x) * x**alpha * log(x)**k with phi = smooth_cutoff (so ==1 near 0)."""
    a = complex(alpha)

    def ev(x: float) -> complex:
        c = smooth_cutoff(x)
        return c * x**a * math.log(x) ** k if c != 0.0 else 0.0

    term = (LogPowerTerm(1.0, a, k),)
    return ExpandableFunction(
        ev,
        AsymptoticExpansion(Location.AT_ZERO, term, a.real + 1 + 8.0),
        empty_expansion(Location.AT_INFINITY, 40.0),
    )


def tail_times_monomial(alpha: complex, k: int = 0) -> ExpandableFunction:
    """psi(x) * x**alpha * log(x)**k with psi = smooth_step_up (==1 for x>=1)."""
    a = complex(alpha)

    def ev(x: float) -> complex:
        c = smooth_step_up(x)
        return c * x**a * math.log(x) ** k if c != 0.0 else 0.0

    term = (LogPowerTerm(1.0, a, k),)
    return ExpandableFunction(
        ev,
        empty_expansion(Location.AT_ZERO, 40.0),
        AsymptoticExpansion(Location.AT_INFINITY, term, -a.real - 1 + 8.0),
    )
