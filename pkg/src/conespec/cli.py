"""Command-line surface: data ingestion, dispatch, emission, verification.

Exit codes: 0 success, 2 schema/input violations, 3 numerical
non-convergence, 4 internal oracle mismatch in verify mode.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional

from . import cone, deficiency, expansions, mellin, sal, specfun
from .cone import ConeError
from .deficiency import DeficiencyError
from .mellin import MellinError
from .sal import SalError
from .specfun import HankelConvergenceError, SpecfunError

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NONCONVERGENCE = 3
EXIT_ORACLE = 4


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _fmt_num(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".16e")
    return str(v)


def _emit_csv(obj, out) -> None:
    rows = obj if isinstance(obj, list) else [obj]
    keys: list[str] = []
    for r in rows:
        for k in sorted(r):
            if k not in keys:
                keys.append(k)
    out.write(",".join(keys) + "\n")
    for r in rows:
        out.write(",".join(_fmt_num(r.get(k, "")) for k in keys) + "\n")


def _emit(obj, args) -> None:
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "csv":
            _emit_csv(obj, out)
        else:
            json.dump(obj, out, sort_keys=True, indent=2)
            out.write("\n")
    finally:
        if args.out:
            out.close()


# ---------------------------------------------------------------------------
# Input plumbing
# ---------------------------------------------------------------------------


def _load_payload(args) -> dict:
    if not getattr(args, "infile", None):
        return {}
    text = args.infile
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    return json.loads(text)


def _pick(args, payload: dict, flag: str, key: str, default=None):
    """Flag value if given, else config-file value, else default."""
    v = getattr(args, flag, None)
    if v is not None:
        return v
    return payload.get(key, default)


def _complex_s(args, payload) -> complex:
    s_re = _pick(args, payload, "s_re", "s_re", 1.0)
    s_im = _pick(args, payload, "s_im", "s_im", 0.0)
    return complex(float(s_re), float(s_im))


def _thread_cap() -> int:
    env = os.environ.get("CONE_SPECTRA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError("CONE_SPECTRA_THREADS must be an integer")
    return 4


def _parse_grid(spec: str):
    """name=start:stop:count, inclusive linear grid."""
    name, _, rng = spec.partition("=")
    parts = rng.split(":")
    if not name or len(parts) != 3:
        raise ValueError(f"bad grid spec {spec!r}; expected name=start:stop:count")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("grid count must be >= 1")
    if count == 1:
        return name, [start]
    step = (stop - start) / (count - 1)
    return name, [start + i * step for i in range(count)]


def _grid_map(fn, jobs):
    with ThreadPoolExecutor(max_workers=min(_thread_cap(), max(1, len(jobs)))) as ex:
        return list(ex.map(fn, jobs))


def _check_tol(tol: Optional[float]) -> None:
    if tol is not None and not (1e-12 <= tol <= 1e-4):
        raise ValueError("tolerance must lie in [1e-12, 1e-4]")


# ---------------------------------------------------------------------------
# Spectra from JSON
# ---------------------------------------------------------------------------


def _first_order_from_json(d: dict) -> cone.FirstOrderSpectrum:
    data = tuple(
        cone.SpectralDatum.from_json_dict(e) for e in d.get("s_data", [])
    )
    tail_spec = d.get("eta_tail", {"kind": "none"})
    kind = tail_spec.get("kind", "none")
    if kind == "none":
        eta_provider = None
    elif kind == "shifted-integer":
        eta_provider = cone.ShiftedIntegerEtaProvider(float(tail_spec["a"]))
    elif kind == "riemann":
        eta_provider = specfun.RiemannZetaProvider(
            scale=float(tail_spec.get("scale", 1.0)),
            exponent=float(tail_spec.get("exponent", 1.0)),
        )
    else:
        raise ValueError(f"unknown eta tail kind {kind!r}")
    return cone.FirstOrderSpectrum(s_data=data, eta_provider=eta_provider)


def _phi_test_function(name: str) -> sal.TestFunction:
    if name == "exp":
        return sal.TestFunction(
            evaluator=lambda x: math.exp(-x),
            derivatives_at_zero=tuple((-1.0) ** j for j in range(13)),
        )
    if name == "gauss":
        derivs = []
        for j in range(13):
            if j % 2:
                derivs.append(0.0)
            else:
                m = j // 2
                derivs.append((-1.0) ** m * math.factorial(2 * m) / math.factorial(m))
        return sal.TestFunction(
            evaluator=lambda x: math.exp(-x * x),
            derivatives_at_zero=tuple(derivs),
        )
    raise ValueError(f"unknown test function {name!r}; use 'exp' or 'gauss'")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_zeta_lp(args) -> int:
    payload = _load_payload(args)
    _check_tol(args.tol)
    s = _complex_s(args, payload)
    p_default = _pick(args, payload, "p", "p")
    if args.grid:
        name, values = _parse_grid(args.grid)
        if name == "p":
            jobs = [(float(v), s) for v in values]
        elif name in ("s-re", "s_re"):
            if p_default is None:
                raise ValueError("--p is required")
            jobs = [(float(p_default), complex(v, s.imag)) for v in values]
        else:
            raise ValueError(f"zeta-lp grids run over 'p' or 's-re', not {name!r}")
        vals = _grid_map(lambda job: cone.zeta_hat_lp(*job), jobs)
        out = [
            {
                "p": pj,
                "s_re": sj.real,
                "s_im": sj.imag,
                "value_re": v.real,
                "value_im": v.imag,
            }
            for (pj, sj), v in zip(jobs, vals)
        ]
        _emit(out, args)
        return EXIT_OK
    if p_default is None:
        raise ValueError("--p is required")
    v = cone.zeta_hat_lp(float(p_default), s)
    _emit(
        {
            "p": float(p_default),
            "s_re": s.real,
            "s_im": s.imag,
            "value_re": v.real,
            "value_im": v.imag,
        },
        args,
    )
    return EXIT_OK


def _cmd_zeta_op(args) -> int:
    payload = _load_payload(args)
    _check_tol(args.tol)
    spec_json = payload["spectrum"] if "spectrum" in payload else payload
    spec = cone.CrossSectionSpectrum.from_json_dict(spec_json)
    s = _complex_s(args, payload)
    order = int(_pick(args, payload, "order", "order", 6))
    rep = cone.zeta_hat_operator_report(spec, s, order=order)
    v = rep["value"]
    _emit(
        {
            "s_re": s.real,
            "s_im": s.imag,
            "value_re": v.real,
            "value_im": v.imag,
            "error_estimate": rep["error_estimate"],
        },
        args,
    )
    return EXIT_OK


def _cmd_eta(args) -> int:
    payload = _load_payload(args)
    _check_tol(args.tol)
    spec = _first_order_from_json(payload)
    res1, res0 = cone.eta_hat_residues(spec)
    out = {
        "res1_re": res1.real,
        "res1_im": res1.imag,
        "res0_re": res0.real,
        "res0_im": res0.imag,
    }
    if args.s_re is not None or args.s_im is not None or "s_re" in payload:
        s = _complex_s(args, payload)
        v = cone.eta_function_scalable(spec, s)
        out.update(
            {"s_re": s.real, "s_im": s.imag, "value_re": v.real, "value_im": v.imag}
        )
    _emit(out, args)
    return EXIT_OK


def _cmd_heat_trace(args) -> int:
    payload = _load_payload(args)
    _check_tol(args.tol)
    spec = cone.CrossSectionSpectrum.from_json_dict(payload["spectrum"])
    nu = float(payload.get("nu", 2.0))
    mu = float(payload.get("mu", 2.0))
    m = int(payload.get("m", 1))
    phi_moments = [complex(v) for v in payload["phi_moments"]]
    b_coeffs = payload.get("b_coeffs")
    if b_coeffs is not None:
        b_coeffs = [complex(v) for v in b_coeffs]
    report = cone.heat_trace_expansion(spec, nu, mu, m, phi_moments, b_coeffs)
    _emit(report.to_json_dict(), args)
    return EXIT_OK


def _cmd_deficiency(args) -> int:
    payload = _load_payload(args)
    g = deficiency.GradedSpectrum.from_json_dict(payload)
    n_plus, n_minus = deficiency.deficiency_indices(g)
    if g.fredholm and n_plus != n_minus:
        raise ValueError(
            "input declared Fredholm but deficiency indices differ: "
            f"{n_plus} != {n_minus}"
        )
    idx = deficiency.index_a_eps(g)
    _emit(
        {
            "n_plus": deficiency._num_out(n_plus),
            "n_minus": deficiency._num_out(n_minus),
            "index": deficiency._num_out(idx),
        },
        args,
    )
    return EXIT_OK


def _cmd_sal_expand(args) -> int:
    payload = _load_payload(args)
    _check_tol(args.tol)
    phi = _phi_test_function(payload.get("phi", "exp"))
    fams = payload.get("families", [])
    if not fams:
        raise ValueError("families must be a nonempty list")
    F = None
    for fam in fams:
        piece = expansions.scale_function(
            expansions.global_monomial(
                complex(fam["alpha"]), int(fam.get("k", 0))
            ),
            complex(fam.get("coef", 1.0)),
        )
        F = piece if F is None else expansions.add_functions(F, piece)
    order = _pick(args, payload, "order", "order")
    q = float(order) if order is not None else None
    report = sal.expand_phi_tx(phi, F, q)
    _emit(report.to_json_dict(), args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------


def _verify_checks(seed: int):
    rng = random.Random(seed)
    checks = []

    def add(name: str, residual: float, tol: float):
        checks.append(
            {
                "check": name,
                "residual": float(residual),
                "tol": float(tol),
                "status": "pass" if residual <= tol else "fail",
            }
        )

    # exact monomial integrals on the unit interval
    worst = 0.0
    for alpha in (-2.0, -1.0, 0.0, 1.7):
        for k in (0, 1, 2):
            got = mellin.regularized_integral_partial(
                expansions.global_monomial(alpha, k), 1.0, mellin.Side.ZERO_TO_C
            )
            want = (
                0.0
                if alpha == -1.0
                else (-1.0) ** k * math.factorial(k) / (alpha + 1.0) ** (k + 1)
            )
            worst = max(worst, abs(got - want))
    add("monomial-partial-closed-form", worst, 1e-12)

    # scale rule vs direct rescaled integration
    worst = 0.0
    for _ in range(3):
        alpha = rng.uniform(0.2, 1.5)
        f = expansions.add_functions(
            expansions.scale_function(
                expansions.cutoff_times_monomial(-1.0, rng.randrange(2)),
                rng.uniform(0.5, 2.0),
            ),
            expansions.scale_function(
                expansions.cutoff_times_monomial(alpha, 0), rng.uniform(0.5, 2.0)
            ),
        )
        lam = rng.uniform(0.3, 3.0)
        got = mellin.scale_rule(f, lam)
        direct = mellin.regularized_integral(expansions.rescale_argument(f, lam))
        worst = max(worst, abs(got - direct))
    add("scale-rule-vs-direct", worst, 1e-8)

    # zeta of the model operator at the normalization point
    add("zeta-lp-normalization", abs(cone.zeta_hat_lp(0.5, 1.0) - 1.0), 1e-10)

    # heat kernel scaling law
    worst = 0.0
    for t in (0.05, 0.4):
        for x in (0.3, 1.0, 2.5):
            lhs = cone.heat_kernel_lp(1.0, t, x, x)
            rhs = cone.k_trace_lp(1.0, t / x**2) / x
            worst = max(worst, abs(lhs - rhs))
    add("heat-kernel-scaling", worst, 1e-12)

    # Hankel transform eigenfunction
    worst = 0.0
    for x in (0.4, 1.1, 2.3):
        got = specfun.hankel_transform(
            lambda y: specfun.l_fn(0, 0.5, y), 0.5, x
        )
        worst = max(worst, abs(got - specfun.l_fn(0, 0.5, x)))
    add("hankel-eigenfunction", worst, 1e-6)

    # Gamma-ratio generation invariants and a sampled ratio
    exp_ = specfun.gamma_ratio_expansion(4)
    exp_.validate()
    got = specfun.evaluate_ratio(exp_, 50.0, 0.3)
    want = specfun.gamma(50.0 - 0.3 + 1) / specfun.gamma(50.0 + 0.3)
    add("gamma-ratio-order-4", abs(got - want) / abs(want), 1e-8)

    # residue assembly vs a Laurent fit, circle cross-section
    circle = cone.CrossSectionSpectrum(
        data=(), tail=specfun.RiemannZetaProvider(scale=2.0, exponent=2.0)
    )
    res1, res0 = cone.residues_at_zero(circle)
    f1, f0 = cone.laurent_fit(lambda s: cone.gamma_zeta_hat(circle, s))
    add("residues-circle-res1", abs(res1), 1e-10)
    add("residues-circle-vs-fit", max(abs(res1 - f1), abs(res0 - f0)), 1e-6)

    # eta residues: universal-constant route vs assembled eta-hat
    sqrt_spec = cone.FirstOrderSpectrum(
        s_data=(),
        eta_provider=specfun.RiemannZetaProvider(scale=1.0, exponent=0.5),
        a_plus_tail=specfun.PowerShiftSquaredProvider(0.5, 0.5),
        a_minus_tail=specfun.PowerShiftSquaredProvider(0.5, -0.5),
    )
    r1, r0 = cone.eta_hat_residues(sqrt_spec)
    f1, f0 = cone.laurent_fit(lambda s: cone.eta_function_scalable(sqrt_spec, s))
    add("eta-residues-vs-fit", max(abs(r1 - f1), abs(r0 - f0)), 1e-4)

    # deficiency arithmetic vs the signature oracle
    worst = 0.0
    for _ in range(25):
        g = deficiency.GradedSpectrum(
            kernel_plus=rng.randrange(4),
            kernel_minus=rng.randrange(4),
            positive=tuple(
                (rng.uniform(0.05, 1.0), rng.randrange(3)) for _ in range(rng.randrange(4))
            ),
            threshold=0.5,
        )
        got = deficiency.deficiency_indices(g)
        brute = deficiency.deficiency_brute_force(g)
        worst = max(worst, abs(got[0] - brute[0]), abs(got[1] - brute[1]))
        worst = max(
            worst, abs((got[0] - got[1]) - deficiency.index_a_eps(g))
        )
    add("deficiency-vs-brute-force", worst, 0.0)

    # Dirac-Schrodinger specialization identities
    worst = 0
    for _ in range(25):
        n_plus, n_minus = rng.randrange(6), rng.randrange(6)
        ind_s = n_plus - n_minus
        got = deficiency.dirac_schrodinger_index(
            n_plus + n_minus, ind_s, 0, deficiency.Extension.MIN
        )
        worst = max(worst, abs(got - (-Fraction(n_plus))))
        ind_s = rng.randrange(-5, 6)
        got = deficiency.dirac_schrodinger_index(
            0, ind_s, -ind_s, deficiency.Extension.MAX
        )
        worst = max(worst, abs(got - (-ind_s)))
    add("dirac-schrodinger-identities", float(worst), 0.0)

    return checks


def _cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else 0
    checks = _verify_checks(seed)
    _emit(checks, args)
    failed = [c for c in checks if c["status"] != "pass"]
    for c in checks:
        print(
            f"[{c['status']}] {c['check']}: residual {c['residual']:.3e}"
            f" (tol {c['tol']:.1e})",
            file=sys.stderr,
        )
    return EXIT_ORACLE if failed else EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="conespec",
        description="Spectral invariants of model-cone operators.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--s-re", dest="s_re", type=float, default=None)
        sp.add_argument("--s-im", dest="s_im", type=float, default=None)
        sp.add_argument("--t", type=float, default=None)
        sp.add_argument("--in", dest="infile", default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--order", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--grid", default=None)
        sp.add_argument("--seed", type=int, default=None)

    for name in (
        "zeta-lp",
        "zeta-op",
        "eta",
        "heat-trace",
        "deficiency",
        "sal-expand",
        "verify",
    ):
        common(sub.add_parser(name))
    return ap


_DISPATCH = {
    "zeta-lp": _cmd_zeta_lp,
    "zeta-op": _cmd_zeta_op,
    "eta": _cmd_eta,
    "heat-trace": _cmd_heat_trace,
    "deficiency": _cmd_deficiency,
    "sal-expand": _cmd_sal_expand,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (HankelConvergenceError, MellinError) as exc:
        print(f"error: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (
        json.JSONDecodeError,
        KeyError,
        TypeError,
        ValueError,
        ConeError,
        DeficiencyError,
        SalError,
        SpecfunError,
    ) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
