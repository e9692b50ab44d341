"""Command-line front end.

Exit codes: 0 when every check passes, 1 when checks ran and something
failed, 2 for usage errors and parameter-domain violations.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from .bounds import lemma_suite, proposition_suite
from .core_poly import eval_poly, norm_squared, normalized_coeffs, series_coeffs
from .jacobi import build_truncated, norm_bound_sup, truncated_norm
from .moments import diag_closed_form, orthogonality_matrix, printed_cn, second_kind_exact
from .params import (
    BesselParams,
    ConvergenceError,
    HorizonTooSmallError,
    ParameterError,
    PrecisionBudgetError,
    to_rational,
)
from .precision import default_precision, working_precision
from .quadrature import verify_orthogonality
from .report import Report, split_complex
from .weight import bridge_identity_residual, solve_x0, weight_integral, weight_series

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_point(text: str):
    """'1/2' and '0.3' give exact rationals; anything with i or j a complex."""
    s = text.strip().replace(" ", "")
    if "i" not in s and "j" not in s:
        return to_rational(s)
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise ParameterError(f"cannot parse {text!r} as a complex number") from exc


def _params(args) -> BesselParams:
    if args.a is None or args.b is None:
        raise ParameterError("--a and --b are required")
    return BesselParams(args.a, args.b)


def _param_dict(p: BesselParams) -> dict:
    return {"a": str(p.a), "b": str(p.b)}


def cmd_eval(args) -> tuple[Report, int]:
    p = _params(args)
    if args.n < 0:
        raise ParameterError("n must be nonnegative")
    z = parse_point(args.z)
    rep = Report("eval", {**_param_dict(p), "n": args.n, "z": args.z}, ["quantity", "re", "im"])
    with working_precision():
        rep.rows.append(["y", *split_complex(eval_poly(series_coeffs(p, args.n), z))])
        if p.real_b and p.a > 1:
            rep.rows.append(["p", *split_complex(eval_poly(normalized_coeffs(p, args.n), z))])
            rep.rows.append(["q", *split_complex(eval_poly(second_kind_exact(p, args.n), z))])
        else:
            rep.summary["note"] = "p and q need a > 1 and real b"
    return rep, EXIT_OK


def _exact_rows(p: BesselParams, max_n: int):
    gram = orthogonality_matrix(p, max_n)
    rows, ok = [], True
    for n in range(max_n + 1):
        for m in range(n, max_n + 1):
            target = diag_closed_form(p.a, n) if n == m else Fraction(0)
            got = gram[n][m]
            ok &= got == target
            rows.append(["exact", n, m, target, got, Fraction(0), float(abs(got - target))])
    normalized = all((-1) ** n * norm_squared(p.a, n) * gram[n][n] == 1 for n in range(max_n + 1))
    mismatch = [n for n in range(1, max_n + 1) if printed_cn(p, n) != -p.b * gram[n][n]]
    summary = {"exact_pass": ok, "normalized_identity": normalized,
               "printed_cn_mismatch": mismatch}
    return rows, ok and normalized, summary


def cmd_verify(args) -> tuple[Report, int]:
    p = _params(args)
    if not p.real_b:
        raise ParameterError("verify needs real b")
    p.require_weight_regime()
    cols = ["mode", "n", "m", "target", "computed_re", "computed_im", "residual"]
    rep = Report("verify", {**_param_dict(p), "max_n": args.max_n, "mode": args.mode}, cols)
    ok = True
    if args.mode in ("quadrature", "both"):
        # domain check first so a bad b is a usage error even in mode both
        orth = verify_orthogonality(p, args.max_n, nodes=args.nodes, bits=args.precision_bits)
    if args.mode in ("exact", "both"):
        rows, passed, summary = _exact_rows(p, args.max_n)
        rep.rows.extend(rows)
        rep.summary.update(summary)
        ok &= passed
    if args.mode in ("quadrature", "both"):
        tol = 1e-10 if args.tolerance is None else args.tolerance
        worst = 0.0
        for row in orth.entries:
            for e in row:
                if e.n > e.m:
                    continue
                c = complex(e.computed)
                rep.rows.append(["quadrature", e.n, e.m, e.target, c.real, c.imag, e.residual])
                ok &= e.residual <= tol * (1 + abs(float(e.target)))
                worst = max(worst, e.residual)
        rep.summary.update({"quadrature_nodes": orth.nodes, "precision_bits": orth.bits,
                            "max_residual": worst, "refinement_delta": orth.refinement_delta})
    rep.summary["pass"] = ok
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_weight(args) -> tuple[Report, int]:
    p = _params(args)
    p.require_weight_regime()
    if args.grid < 2:
        raise ParameterError("--grid must be at least 2")
    tol = 1e-10 if args.tolerance is None else args.tolerance
    th = np.linspace(0.0, 2 * math.pi, args.grid)
    pi_ = weight_integral(p, th)
    ps = weight_series(p, th)
    res = np.abs(pi_ - ps)
    bridge = bridge_identity_residual(p, th)
    rep = Report("weight", {**_param_dict(p), "grid": args.grid},
                 ["theta", "p_integral", "p_series", "residual", "bridge_residual"])
    for row in zip(th, pi_, ps, res, bridge):
        rep.rows.append([float(v) for v in row])
    ok = bool(res.max() <= tol and bridge.max() <= tol)
    rep.summary = {"min_p": float(pi_.min()), "positive": bool(pi_.min() > 0),
                   "max_residual": float(res.max()), "max_bridge_residual": float(bridge.max()),
                   "pass": ok}
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_x0(args) -> tuple[Report, int]:
    tol = 1e-12 if args.tolerance is None else args.tolerance
    t = solve_x0(tol)
    rep = Report("x0", {"tolerance": tol}, ["x0", "bracket_lo", "bracket_hi", "residual"])
    rep.rows.append([t.x0, t.bracket[0], t.bracket[1], t.residual])
    rep.summary = {"exceeds_one_third": t.x0 > 1 / 3}
    return rep, EXIT_OK


def cmd_jacobi(args) -> tuple[Report, int]:
    p = _params(args)
    if args.size < 1:
        raise ParameterError("--size must be at least 1")
    J = build_truncated(p, args.size)
    rep = Report("jacobi", {**_param_dict(p), "size": args.size}, ["n", "b_n", "re_a_n", "im_a_n"])
    for i in range(J.size):
        a = J.off[i] if i < J.size - 1 else 0j
        rep.rows.append([i, J.diag[i].real, a.real, a.imag])
    norm = truncated_norm(p, args.size)
    sup = norm_bound_sup(p)
    ok = norm <= sup + 1e-10
    rep.summary = {"truncated_norm": norm, "norm_bound_sup": sup, "bound_at_most_one": sup <= 1,
                   "norm_within_bound": ok}
    return rep, EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> tuple[Report, int]:
    p = _params(args)
    p.require_weight_regime()
    if not 0 < abs(p.b) < Fraction(1, 3):
        raise ParameterError("the second-kind bound suite needs b in (-1/3, 1/3) without 0")
    kw = {"samples": args.samples, "seed": args.seed, "rhs_scale": args.rhs_scale}
    suites = [lemma_suite(p, max_n=args.max_n or 12, **kw), proposition_suite(p, max_n=args.max_n or 10, **kw)]
    rep = Report("bounds", {**_param_dict(p), "samples": args.samples, "seed": args.seed},
                 ["suite", "check", "index", "n", "z_re", "z_im", "lhs", "rhs", "holds"])
    for s in suites:
        for smp in s.samples:
            rep.rows.append([s.name, smp.check, smp.index, smp.n, smp.z.real, smp.z.imag,
                             smp.lhs, smp.rhs, smp.holds])
        rep.summary[f"{s.name}_violations"] = s.violations
        rep.summary[f"{s.name}_rejected"] = s.rejected
    ok = all(s.violations == 0 for s in suites)
    rep.summary["pass"] = ok
    return rep, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "weight": cmd_weight,
    "x0": cmd_x0,
    "jacobi": cmd_jacobi,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", help="parameter a (decimal or rational, e.g. 7/2)")
    common.add_argument("--b", help="parameter b (decimal or rational)")
    common.add_argument("--precision-bits", type=int, default=None)
    common.add_argument("--nodes", type=int, default=1024)
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--digits", type=int, default=15)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="gbessel", description="Generalized Bessel polynomials on the unit circle.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", parents=[common], help="y_n(z), p_n(z), q_n(z)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z", required=True)

    sp = sub.add_parser("verify", parents=[common], help="orthogonality matrix with residuals")
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--mode", choices=["exact", "quadrature", "both"], default="both")

    sp = sub.add_parser("weight", parents=[common], help="p on a theta grid, both routes and the bridge")
    sp.add_argument("--grid", type=int, default=720)

    sub.add_parser("x0", parents=[common], help="positivity threshold x0")

    sp = sub.add_parser("jacobi", parents=[common], help="truncated Jacobi matrix and norm report")
    sp.add_argument("--size", type=int, default=100)

    sp = sub.add_parser("bounds", parents=[common], help="random growth-bound suites")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--max-n", type=int, default=None)
    sp.add_argument("--rhs-scale", type=float, default=1.0,
                    help="multiply right-hand sides (values < 1 are sensitivity checks)")
    return parser


VALUE_FLAGS = {"--a", "--b", "--z"}


def _attach_signed_values(argv):
    """argparse reads '-1/4' or '-2+i' as an option; bind them to their flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_signed_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        with default_precision(args.precision_bits):
            report, status = COMMANDS[args.command](args)
    except (ParameterError, PrecisionBudgetError, HorizonTooSmallError, ValueError) as exc:
        print(f"gbessel {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"gbessel {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = report.render(args.format, args.digits)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
