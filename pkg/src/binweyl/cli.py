"""Command-line front end.

Every subcommand runs one library operation and emits a machine-readable
report: RFC-4180 CSV (header row, floats with --precision significant
digits) or JSON ({"config", "rows", "diagnostics"}).  All randomized scans
are driven by --seed, so identical invocations produce byte-identical
output.  Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import _kernels, approx, diophantine, extremal, pde_fractal, weyl
from .exp_sums import complete_sum_crt, complete_sum_direct
from .oscillatory import QuadratureError, integral_eval, integral_linear, integral_quad


def _fmt(value, precision: int):
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    return value


def emit(rows: list[dict], diagnostics: dict, config: dict, out=None) -> None:
    """Write the report in the configured format to --out or stdout."""
    fmt = config["format"]
    buf = io.StringIO()
    if fmt == "csv":
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt(v, config["precision"]) for k, v in row.items()})
    else:
        payload = {"config": config, "rows": rows, "diagnostics": diagnostics}
        buf.write(json.dumps(payload, indent=2, sort_keys=True, default=str))
        buf.write("\n")
    text = buf.getvalue()
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _real(s: str) -> Fraction:
    return diophantine.real_from_token(s)


def _complex_row(prefix: str, z: complex, extra: dict | None = None) -> dict:
    row = dict(extra or {})
    row[f"{prefix}_re"] = z.real
    row[f"{prefix}_im"] = z.imag
    row[f"{prefix}_abs"] = abs(z)
    return row


def _parse_range(args) -> weyl.Range:
    if args.P is not None:
        return weyl.Full(args.P)
    if args.Q is not None:
        return weyl.Dyadic(args.Q)
    raise ValueError("specify exactly one of --P (full range) or --Q (dyadic range)")


def _cmd_csum(args, config):
    if args.method == "direct":
        value = complete_sum_direct(args.q, args.a1, args.ak, args.k)
    elif args.method == "crt":
        value = complete_sum_crt(args.q, args.a1, args.ak, args.k)
    else:
        value = (complete_sum_crt if args.q > 10**6 else complete_sum_direct)(
            args.q, args.a1, args.ak, args.k
        )
    row = _complex_row(
        "value", value, {"q": args.q, "a1": args.a1, "ak": args.ak, "k": args.k}
    )
    return [row], {"method": args.method}


def _cmd_weyl(args, config):
    rng = _parse_range(args)
    value = weyl.weyl_sum([(1, _real(args.alpha1)), (args.k, _real(args.alphak))], rng)
    row = _complex_row(
        "value",
        value,
        {
            "k": args.k,
            "alpha1": float(_real(args.alpha1)),
            "alphak": float(_real(args.alphak)),
            "range": "full" if isinstance(rng, weyl.Full) else "dyadic",
            "bound": args.P if args.P is not None else args.Q,
        },
    )
    return [row], {}


def _cmd_integral(args, config):
    if args.intervals:
        ivs = []
        for part in args.intervals.split(","):
            lo, _, hi = part.partition(":")
            ivs.append((float(lo), float(hi)))
    elif args.P is not None:
        ivs = [(0.0, args.P)]
    else:
        raise ValueError("specify --intervals lo:hi[,lo:hi...] or --P")
    beta1 = float(_real(args.beta1))
    betak = float(_real(args.betak))
    if betak == 0.0:
        value = sum(integral_linear(beta1, lo, hi) for lo, hi in ivs)
        method = "closed-form"
    else:
        value = integral_quad(beta1, betak, args.k, ivs)
        method = "gauss-kronrod"
    row = _complex_row(
        "value", value, {"beta1": beta1, "betak": betak, "k": args.k, "method": method}
    )
    return [row], {}


def _cmd_main_term(args, config):
    ma = approx.BinomialApprox(
        args.q, args.a1, args.ak, float(_real(args.beta1)), float(_real(args.betak)), args.k
    )
    rng = _parse_range(args)
    f = approx.binomial_sum(ma, rng)
    main = approx.main_term(ma, rng)
    terms = approx.divisor_terms(ma.q, ma.a1)
    row = _complex_row("f", f)
    row.update(_complex_row("main", main))
    row["delta_abs"] = abs(f - main)
    row["n_terms"] = len(terms)
    diag = {
        "terms": [
            {"d": t.d, "e": t.e, "numerator": t.numerator, "center": str(t.center),
             "leading": t.leading}
            for t in terms
        ],
        "envelope": approx.residual_envelope(ma, args.P if args.P else 2 * args.Q),
        "calibration": vars(approx.CALIBRATION),
    }
    return [row], diag


def _cmd_delta_scan(args, config):
    rows = approx.delta_scan(
        args.k, args.samples, args.qmax, args.pmax, config["seed"], args.tight_top
    )
    worst = max((r["ratio"] for r in rows), default=0.0)
    return rows, {"max_ratio": worst, "calibration": vars(approx.CALIBRATION)}


def _cmd_dio(args, config):
    if args.op == "cf":
        convs = diophantine.continued_fraction(args.gamma, args.n)
        rows = [{"c": cv.c, "q": cv.q, "err": cv.err} for cv in convs]
        return rows, {"produced": len(convs)}
    if args.op == "odd":
        cv = diophantine.odd_convergent(args.gamma, args.qmin)
        return [{"c": cv.c, "q": cv.q, "err": cv.err}], {}
    if args.op == "dirichlet":
        a, q, beta = diophantine.dirichlet_approx(args.gamma, args.qbound)
        return [{"a": a, "q": q, "beta": beta}], {}
    if args.op == "kappa":
        sp = diophantine.exponent_split(args.q)
        return [{"q": args.q, "q2": sp.q2, "q3": sp.q3, "saving": sp.saving}], {}
    if args.op == "gamma0":
        pairs = diophantine.gamma0_violations(args.gamma, args.delta, args.qmax)
        rows = [{"q": q, "c": c} for q, c in pairs]
        return rows, {"count": len(pairs)}
    if args.op == "khinchine":
        val = diophantine.khinchine_minimum(args.gamma, args.qmax)
        return [{"qmax": args.qmax, "minimum": val}], {}
    raise ValueError(f"unknown dio op {args.op!r}")


def _cmd_witness(args, config):
    rep = extremal.lower_bound_witness(args.gamma, args.k, args.delta, args.qmin)
    row = {
        "gamma": rep.gamma, "k": rep.k, "q": rep.q, "c": rep.c, "a_k": rep.a_k,
        "delta": rep.delta, "Q": rep.Q, "alpha": rep.alpha, "f_abs": rep.f_abs,
        "predicted": rep.predicted, "s_abs": rep.s_abs, "floor_ok": rep.floor_ok,
    }
    return [row], {"witness_floor": approx.CALIBRATION.witness_floor}


def _cmd_sup_search(args, config):
    alpha_star, value = extremal.sup_search(
        args.gamma, args.k, args.Q,
        coarse=args.coarse, refine_iters=args.refine_iters, threads=config["threads"],
    )
    return [{"k": args.k, "Q": args.Q, "alpha_star": alpha_star, "value": value}], {}


def _cmd_theta(args, config):
    lo, _, hi = args.scales.partition("..")
    e_lo, e_hi = int(lo), int(hi)
    if e_hi <= e_lo:
        raise ValueError("--scales must be an increasing octave range like 8..16")
    step = 1.0 / args.per_octave
    Qs, e = [], float(e_lo)
    while e <= e_hi + 1e-9:
        Qs.append(2.0**e)
        e += step
    slope, stderr, rows = extremal.exponent_regression(
        args.gamma, args.k, Qs, args.mode,
        delta=args.delta, threads=config["threads"], coarse_cap=args.coarse_cap,
    )
    return rows, {"slope": slope, "stderr": stderr, "mode": args.mode}


def _cmd_fractal(args, config):
    g = pde_fractal.StepFunction(
        tuple(float(x) for x in args.breakpoints.split(",")),
        tuple(float(x) for x in args.values.split(",")),
    )
    r = Fraction(args.r)
    rng = np.random.default_rng(config["seed"])
    if args.c == "random":
        cs = [float(rng.uniform(0.0, 2.0 * math.pi)) for _ in range(args.runs)]
    else:
        cs = [float(_real(args.c))]
    rows, counts = [], []
    for c in cs:
        rep = pde_fractal.dimension_pipeline(
            g, args.k, r, c, N=args.N, samples=args.samples, threads=config["threads"]
        )
        rows.append(
            {
                "k": args.k, "r": str(r), "c": c,
                "dim_re": rep.dim_re.slope, "dim_im": rep.dim_im.slope,
                "dim": rep.dimension,
                "holder_re": rep.holder_re, "holder_im": rep.holder_im,
                "stderr_re": rep.dim_re.stderr, "stderr_im": rep.dim_im.stderr,
                "trunc_l2": rep.restriction.trunc_l2,
            }
        )
        counts.extend(
            {"c": c, "part": "re", "eps": eps, "count": cnt}
            for eps, cnt in rep.dim_re.scales
        )
    if args.emit == "counts":
        return counts, {"runs": len(cs)}
    return rows, {"runs": len(cs)}


def _cmd_moment(args, config):
    if args.mode == "parseval":
        numeric, exact = weyl.second_moment_parseval(
            args.k, _real(args.gamma), args.Q, grid=args.grid, threads=config["threads"]
        )
        rel = abs(numeric - exact) / exact
        return (
            [{"k": args.k, "Q": args.Q, "numeric": numeric, "exact": exact, "rel_err": rel}],
            {"grid": args.grid or weyl.default_moment_grid(args.k, args.Q)},
        )
    major, total = weyl.minor_arc_second_moment(
        args.k, args.P, args.phi, args.psi, threads=config["threads"]
    )
    row = {
        "k": args.k, "P": args.P, "phi": args.phi, "psi": args.psi,
        "major": major, "total": total, "minor": total - major, "ratio": major / args.P,
    }
    return [row], {}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="binweyl",
        description="Binomial Weyl sums, complete sums, main-term approximations, "
        "extremal exponents and dispersive fractal dimensions.",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for all randomized scans")
    p.add_argument("--precision", type=int, default=12, help="CSV float digits")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default WEYL_THREADS or CPU count)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("csum", help="complete exponential sum S(q; a1, ak)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--a1", type=int, required=True)
    sp.add_argument("--ak", type=int, required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--method", choices=["auto", "direct", "crt"], default="auto")
    sp.set_defaults(fn=_cmd_csum)

    sp = sub.add_parser("weyl", help="binomial Weyl sum")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alpha1", required=True)
    sp.add_argument("--alphak", required=True)
    sp.add_argument("--P", type=float)
    sp.add_argument("--Q", type=float)
    sp.set_defaults(fn=_cmd_weyl)

    sp = sub.add_parser("integral", help="oscillatory integral I(beta1, betak)")
    sp.add_argument("--beta1", required=True)
    sp.add_argument("--betak", required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--P", type=float)
    sp.add_argument("--intervals", help="lo:hi[,lo:hi...]")
    sp.set_defaults(fn=_cmd_integral)

    sp = sub.add_parser("main-term", help="divisor-term approximation of f")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--a1", type=int, required=True)
    sp.add_argument("--ak", type=int, required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--beta1", default="0")
    sp.add_argument("--betak", default="0")
    sp.add_argument("--P", type=float)
    sp.add_argument("--Q", type=float)
    sp.set_defaults(fn=_cmd_main_term)

    sp = sub.add_parser("delta-scan", help="randomized |f - main| ratio scan")
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--qmax", type=int, default=500)
    sp.add_argument("--pmax", type=float, default=5000.0)
    sp.add_argument("--tight-top", action="store_true",
                    help="force betak into the tight regime 1/(4kq P^(k-1))")
    sp.set_defaults(fn=_cmd_delta_scan)

    sp = sub.add_parser("dio", help="diophantine helpers")
    sp.add_argument("--op", required=True,
                    choices=["cf", "odd", "dirichlet", "kappa", "gamma0", "khinchine"])
    sp.add_argument("--gamma", default="sqrt2")
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--qmin", type=int, default=1)
    sp.add_argument("--qbound", type=float, default=100.0)
    sp.add_argument("--q", type=int, default=12)
    sp.add_argument("--delta", type=float, default=0.2)
    sp.add_argument("--qmax", type=int, default=10**5)
    sp.set_defaults(fn=_cmd_dio)

    sp = sub.add_parser("witness", help="major-arc lower-bound witness")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--delta", type=float, default=0.02)
    sp.add_argument("--qmin", type=int, default=3)
    sp.set_defaults(fn=_cmd_witness)

    sp = sub.add_parser("sup-search", help="grid + refinement sup estimate")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--Q", type=float, required=True)
    sp.add_argument("--coarse", type=int)
    sp.add_argument("--refine-iters", type=int, default=40)
    sp.set_defaults(fn=_cmd_sup_search)

    sp = sub.add_parser("theta", help="growth-exponent regression over scales")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mode", choices=["witness", "grid"], default="witness")
    sp.add_argument("--scales", default="8..16", help="octave range lo..hi")
    sp.add_argument("--per-octave", type=int, default=1)
    sp.add_argument("--delta", type=float, default=0.02)
    sp.add_argument("--coarse-cap", type=int, default=10**7)
    sp.set_defaults(fn=_cmd_theta)

    sp = sub.add_parser("fractal", help="dispersive fractal-dimension pipeline")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", default="1")
    sp.add_argument("--c", default="random")
    sp.add_argument("--runs", type=int, default=1)
    sp.add_argument("--N", type=int, default=pde_fractal.DEFAULT_TRUNC)
    sp.add_argument("--samples", type=int, default=pde_fractal.MIN_SAMPLES)
    sp.add_argument("--breakpoints", default="0,3.141592653589793")
    sp.add_argument("--values", default="1,0")
    sp.add_argument("--emit", choices=["dims", "counts"], default="dims")
    sp.set_defaults(fn=_cmd_fractal)

    sp = sub.add_parser("moment", help="second-moment diagnostics")
    sp.add_argument("--mode", choices=["parseval", "minor-arc"], default="parseval")
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--gamma", default="sqrt2")
    sp.add_argument("--Q", type=float, default=50.0)
    sp.add_argument("--grid", type=int)
    sp.add_argument("--P", type=float, default=200.0)
    sp.add_argument("--phi", type=float, default=0.1)
    sp.add_argument("--psi", type=float, default=0.3)
    sp.set_defaults(fn=_cmd_moment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {
        "command": args.command,
        "seed": args.seed,
        "precision": args.precision,
        "format": args.format,
        "threads": args.threads if args.threads else _kernels.default_threads(),
    }
    try:
        rows, diagnostics = args.fn(args, config)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit(rows, diagnostics, config, out=args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
