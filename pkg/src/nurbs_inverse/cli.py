"""Command-line entry point: ``nurbs-inverse <command> [options]``.

Exit codes: 0 success, 1 validation error, 2 non-general curve,
3 invariant violation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from .bspline import CurveError, DomainError, bspline_basis, curve_eval
from .document import FIXTURES, load_curve, load_fixture, loads, dumps
from .local_inverse import (NonGeneralSegment, PointNotOnCurve, genericity_check, global_inverse,
                            invert_point)
from .newton_oracle import OracleConfig, bench_compare, self_intersections
from .physical import inverse_spline_form, physical_knots, physical_splines
from .ratpoly import Backend, BackendMismatch, fmt_scalar, parse_scalar

EXIT_OK, EXIT_VALIDATION, EXIT_NONGENERAL, EXIT_INVARIANT = 0, 1, 2, 3


class InvariantViolation(RuntimeError):
    pass


def _fmt(v) -> str:
    return fmt_scalar(v) if isinstance(v, Fraction) else repr(float(v))


def _scalar(text: str, be: Backend):
    v = parse_scalar(text)
    return v if be is Backend.EXACT else float(v)


def _backend(args) -> Backend:
    return Backend.EXACT if args.backend == "exact" else Backend.FLOAT


def _load(args):
    """Curve file path, or ``fixture:<name>`` for a bundled example."""
    src = args.curve
    be = _backend(args)
    if src.startswith("fixture:"):
        return load_fixture(src.split(":", 1)[1], be)
    return load_curve(src, be)


def _tol(args, be):
    return parse_scalar(args.tol) if be is Backend.EXACT else float(args.tol)


def _degree(args, c) -> int:
    p = args.degree if args.degree is not None else c.degree
    m = len(c.knots) - 1
    if not 1 <= p <= m - 1:
        raise CurveError(f"--degree: must lie in 1..{m - 1}, got {p}")
    return p


def _read_lines(path):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            yield line


# -- commands ---------------------------------------------------------------

def cmd_eval(args, out):
    c = _load(args)
    values = list(args.u)
    if args.file:
        values += list(_read_lines(args.file))
    for text in values:
        u = _scalar(text, c.backend)
        x, y = curve_eval(c, u)
        print(_fmt(u), _fmt(x), _fmt(y), file=out)
    return EXIT_OK


def cmd_invert(args, out):
    c = _load(args)
    be = c.backend
    inv = global_inverse(c, be)
    tol = _tol(args, be)
    for line in _read_lines(args.points):
        parts = line.split()
        if len(parts) != 2:
            raise CurveError(f"points: expected 'x y', got {line!r}")
        x, y = (_scalar(v, be) for v in parts)
        try:
            res = invert_point(inv, (x, y), tol)
        except PointNotOnCurve:
            print(_fmt(x), _fmt(y), "NOT_ON_CURVE", file=out)
            continue
        for cd in res.candidates:
            rec = [_fmt(x), _fmt(y), _fmt(cd.u), str(cd.segment), f"{cd.residual:.3e}"]
            if res.multivalued:
                rec.append("MULTI")
            print(*rec, file=out)
    return EXIT_OK


def _poly_doc(poly):
    return [[i, j, _fmt(v)] for (i, j), v in sorted(poly.terms.items())]


def cmd_inverse_repr(args, out):
    c = _load(args)
    bad = [r for r in genericity_check(c) if not r.general]
    if bad:
        raise NonGeneralSegment(bad[0].k, f"segment {bad[0].k}: {bad[0].details}")
    inv = global_inverse(c, c.backend)
    doc = {"name": c.name, "form": args.form, "backend": args.backend}
    if args.form == "piecewise":
        doc["segments"] = []
        for s in inv.segments:
            num, den = s.global_rational()
            doc["segments"].append({"segment": s.k, "u_lo": _fmt(s.u_lo), "u_hi": _fmt(s.u_hi),
                                    "numerator": _poly_doc(num), "denominator": _poly_doc(den)})
    else:
        p = _degree(args, c)
        form = inverse_spline_form(c.exact(), p, global_inverse(c))
        doc["degree"] = p
        doc["greville"] = [fmt_scalar(v) for v in form.greville]
        doc["splines"] = []
        for s in form.splines:
            branches = []
            for pos in sorted(s.branches):
                num, den = s.rational(pos)
                branches.append({"segment": inv.segments[pos].k,
                                 "numerator": _poly_doc(num), "denominator": _poly_doc(den)})
            doc["splines"].append({"k": s.k, "branches": branches})
    doc["terms"] = "[i, j, c] means c * x^i * y^j"
    print(json.dumps(doc), file=out)
    return EXIT_OK


def run_checks(c, p: int, samples: int = 100, seed: int = 0):
    """Invariant suite: list of ``(name, passed, max_error, note)``."""
    be = c.backend
    exact = be is Backend.EXACT
    rng = random.Random(seed)
    lo, hi = c.exact().domain
    results = []

    def record(name, err, ok, note=""):
        results.append((name, bool(ok), float(err), note))

    # document round trip
    again = loads(dumps(c))
    record("document_round_trip", 0, again == c.exact())

    gen = genericity_check(c)
    record("genericity", sum(not r.general for r in gen), all(r.general for r in gen),
           "; ".join(f"segment {r.k}: {r.details}" for r in gen if not r.general))
    if not all(r.general for r in gen):
        return results

    crossings = self_intersections(c)
    inv = global_inverse(c, be)
    us = [lo + (hi - lo) * Fraction(rng.randint(0, 10 ** 6), 10 ** 6) for _ in range(samples)]
    us += [lo, hi]
    if not exact:
        us = [float(u) for u in us]

    def near_crossing(u):
        return any(min(abs(float(u) - s.u1), abs(float(u) - s.u2)) < 1e-6 for s in crossings)

    worst, ok = 0.0, True
    for u in us:
        pt = curve_eval(inv.curve, u)
        cands = [cd.u for cd in invert_point(inv, pt).candidates]
        err = min(abs(v - u) for v in cands)
        worst = max(worst, float(err))
        ok &= (err == 0) if exact else (err < 1e-9)
    record("round_trip", worst, ok)

    pkv = physical_knots(c, p=p)
    U = pkv.parametric()
    splines = physical_splines(c, inv, pkv, p)
    form = inverse_spline_form(c.exact(), p, inv)
    pull = part = form_err = 0.0
    nonneg = support = True
    for u in us:
        pos = inv.segment_index(u)
        pt = curve_eval(inv.curve, u)
        v = inv.eval_on_segment(pos, *pt)
        vals = [s.branch_value(pos, v) for s in splines]
        ref = [bspline_basis(U if exact else U.to_backend(Backend.FLOAT), p, i, u)
               for i in range(len(splines))]
        pull = max(pull, max(float(abs(a - b)) for a, b in zip(vals, ref)))
        part = max(part, float(abs(sum(vals) - 1)))
        nonneg &= all(x >= (0 if exact else -1e-12) for x in vals)
        support &= all(x == 0 for s, x in zip(splines, vals) if pos not in s.branches)
        if not near_crossing(u):
            form_err = max(form_err, float(abs(form.eval(pt, inv.segments[pos].k) - v)))
    tol = 0 if exact else 1e-11
    record("pullback_identity", pull, pull <= tol)
    record("partition_of_unity", part, part <= tol)
    record("nonnegativity", 0, nonneg)
    record("local_support", 0, support)
    record("spline_form_agreement", form_err, form_err <= (0 if exact else 1e-9))
    if crossings:
        s = crossings[0]
        res = invert_point(inv.to_backend(Backend.FLOAT), s.point, 1e-8)
        record("self_intersection", 0, res.multivalued,
               f"self-intersection detected at u={s.u1:.8f}, {s.u2:.8f}")
    return results


def cmd_check(args, out):
    c = _load(args)
    p = _degree(args, c)
    results = run_checks(c, p, args.samples)
    failed = False
    for name, ok, err, note in results:
        line = f"{'PASS' if ok else 'FAIL'} {name} max_error={err:.3e}"
        print(line + (f" ({note})" if note else ""), file=out)
        failed |= not ok
    for name, ok, _, note in results:
        if name == "genericity" and not ok:
            raise NonGeneralSegment(-1, note)
    if failed:
        raise InvariantViolation("invariant check failed")
    return EXIT_OK


def cmd_plot_data(args, out):
    c = _load(args)
    n = args.samples
    if n < 2:
        raise CurveError("--samples: need at least 2")
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    lo, hi = c.exact().domain
    us = [lo + (hi - lo) * Fraction(i, n - 1) for i in range(n)]
    if c.backend is Backend.FLOAT:
        us = [float(u) for u in us]
    pts = [curve_eval(c, u) for u in us]
    written = []
    if args.what == "curve":
        path = outdir / "curve.dat"
        path.write_text("".join(f"{_fmt(u)} {_fmt(x)} {_fmt(y)}\n" for u, (x, y) in zip(us, pts)))
        written.append(path)
    else:
        inv = global_inverse(c, c.backend)
        if args.what == "inverse":
            path = outdir / "inverse.dat"
            lines = [f"{_fmt(x)} {_fmt(y)} {_fmt(inv.eval_on_segment(inv.segment_index(u), x, y))}\n"
                     for u, (x, y) in zip(us, pts)]
            path.write_text("".join(lines))
            written.append(path)
        else:
            p = _degree(args, c)
            splines = physical_splines(c, inv, physical_knots(c, p=p), p)
            for s in splines:
                path = outdir / f"spline_{s.k}_{p}.dat"
                lines = []
                for u, (x, y) in zip(us, pts):
                    pos = inv.segment_index(u)
                    v = s.branch_value(pos, inv.eval_on_segment(pos, x, y))
                    lines.append(f"{_fmt(x)} {_fmt(y)} {_fmt(v)}\n")
                path.write_text("".join(lines))
                written.append(path)
    for path in written:
        print(path, file=out)
    return EXIT_OK


def cmd_bench(args, out):
    c = _load(args)
    cfg = OracleConfig(tolerance=float(args.tol))
    report = bench_compare(c, args.points, cfg)
    print(report.to_json() if args.json else report.to_text(), file=out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # subcommand copies default to SUPPRESS so flags work before or after the command
    common.add_argument("--backend", choices=("exact", "float"), default=argparse.SUPPRESS)
    common.add_argument("--tol", default=argparse.SUPPRESS, help="tolerance (default 1e-9)")
    common.add_argument("--degree", type=int, default=argparse.SUPPRESS,
                        help="physical spline degree p (default: curve degree)")

    ap = argparse.ArgumentParser(
        prog="nurbs-inverse",
        description="Exact rational inverses of planar NURBS curves. CURVE is a JSON "
                    f"document or fixture:NAME with NAME in {', '.join(FIXTURES)}.")
    ap.add_argument("--backend", choices=("exact", "float"), default="float")
    ap.add_argument("--tol", default="1e-9")
    ap.add_argument("--degree", type=int, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate the curve")
    p.add_argument("curve")
    p.add_argument("u", nargs="*", help="parameter values (ints, decimals or p/q)")
    p.add_argument("--file", help="file of parameter values, one per line ('-' for stdin)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("invert", parents=[common], help="preimages of points")
    p.add_argument("curve")
    p.add_argument("points", help="file of 'x y' lines ('-' for stdin)")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("inverse-repr", parents=[common], help="print the inverse as JSON")
    p.add_argument("curve")
    p.add_argument("--form", choices=("piecewise", "spline"), default="piecewise")
    p.set_defaults(func=cmd_inverse_repr)

    p = sub.add_parser("check", parents=[common], help="run the invariant suite")
    p.add_argument("curve")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("plot-data", parents=[common], help="write columnar data files")
    p.add_argument("curve")
    p.add_argument("--what", choices=("curve", "splines", "inverse"), default="curve")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("bench", parents=[common], help="closed form vs Newton timings")
    p.add_argument("curve")
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except NonGeneralSegment as exc:
        print(f"error: non-general curve: {exc}", file=sys.stderr)
        return EXIT_NONGENERAL
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (CurveError, DomainError, BackendMismatch, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
