"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
output) or ``python tests/test_acceptance.py`` for the bare summary.
"""
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import FIXTURE_NAMES, curve, inverse  # noqa: E402
from nurbs_inverse import (Backend, OracleConfig, bench_compare, bspline_basis,  # noqa: E402
                           continuity_probe, curve_eval, global_inverse, inverse_spline_form,
                           invert_point, local_inverse_from_minors, newton_invert,
                           physical_knots, physical_splines, quadratic_closed_form,
                           self_intersections, spline_eval, sylvester)
from oracles import published_linear_splines  # noqa: E402

_LINES = []


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2} {title}: {detail}"
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def _interior(count):
    return [F(j, count + 1) for j in range(1, count + 1)]


def test_criterion_01_quadratic_golden_inverse(report):
    start = time.perf_counter()
    c = curve("quadratic")
    pi = global_inverse(c)
    published = [(lambda x, y: (-31 * x + 3 * y, 28 * x + 31 * y - 57)),
                 (lambda x, y: (255 * x + 85 * y - 136, 180 * x + 55 * y - 49))]
    worst = 0
    for pos, s in enumerate(pi.segments):
        N, D = s.global_rational()
        for t in _interior(100):
            x, y = s.bezier.point(t)
            pn, pd = published[pos](x, y)
            worst = max(worst, abs(N.eval(x, y) * pd - D.eval(x, y) * pn))
    elapsed = time.perf_counter() - start
    report(1, "quadratic golden inverse", worst == 0 and elapsed < 5,
           f"max cross-multiplied residual {worst} over 200 points, {elapsed:.2f} s (< 5 s)")


def test_criterion_02_physical_knots(report):
    got = {
        "quadratic": physical_knots(curve("quadratic"), p=1).distinct_points[1:2],
        "cubic": physical_knots(curve("cubic"), p=2).distinct_points[1:4],
        "quintic": physical_knots(curve("quintic"), p=4).distinct_points[1:2],
    }
    want = {
        "quadratic": [(F(7, 15), F(3, 5))],
        "cubic": [(F(25, 24), F(26, 27)), (F(25, 16), F(-7, 144)), (F(71, 28), F(397, 252))],
        "quintic": [(F(2), F(2, 23))],
    }
    bad = [k for k in want if got[k] != want[k]]
    report(2, "physical knots exact", not bad,
           "all five knot images equal" if not bad else f"mismatch in {bad}: {got}")


def test_criterion_03_linear_physical_splines(report):
    c, pi = curve("quadratic"), inverse("quadratic")
    splines = physical_splines(c, pi, physical_knots(c, p=1), 1)
    mismatches = checked = 0
    for k, s in enumerate(splines):
        for pos, seg in enumerate(pi.segments):
            for t in [F(j, 50) for j in range(50)]:
                x, y = seg.bezier.point(t)
                checked += 1
                if spline_eval(s, (x, y), segment_hint=seg.k) != published_linear_splines(k, pos, x, y):
                    mismatches += 1
    report(3, "linear physical splines", mismatches == 0,
           f"{mismatches} mismatches over {checked} evaluations (3 splines x 2 segments x 50)")


def test_criterion_04_round_trip(report):
    start = time.perf_counter()
    exact_err, float_err = {}, {}
    us = [F(j, 999) for j in range(1000)]
    for name in FIXTURE_NAMES:
        c, pi = curve(name), inverse(name)
        exact_err[name] = max(min(abs(cd.u - u) for cd in invert_point(pi, curve_eval(c, u)).candidates)
                              for u in us)
        fc, fpi = curve(name, Backend.FLOAT), inverse(name, Backend.FLOAT)
        bounds = [float(s.u_lo) for s in fpi.segments] + [float(fpi.segments[-1].u_hi)]
        worst = 0.0
        for u in us:
            u = float(u)
            if min(abs(u - b) for b in bounds) < 1e-6:
                continue
            cands = invert_point(fpi, curve_eval(fc, u)).candidates
            worst = max(worst, min(abs(cd.u - u) for cd in cands))
        float_err[name] = worst
    elapsed = time.perf_counter() - start
    ok = all(v == 0 for v in exact_err.values()) and all(v < 1e-9 for v in float_err.values()) \
        and elapsed < 60
    detail = ", ".join(f"{n}: exact {exact_err[n]} float {float_err[n]:.1e}" for n in FIXTURE_NAMES)
    report(4, "round trip", ok, f"{detail}; {elapsed:.1f} s (< 60 s)")


def test_criterion_05_spline_form_equivalence(report):
    c, pi = curve("quadratic"), inverse("quadratic")
    f1 = inverse_spline_form(c, 1, pi)
    f2 = inverse_spline_form(c, 2, pi)
    rng = random.Random(5)
    bad = 0
    for _ in range(200):
        u = F(rng.randint(0, 10 ** 6), 10 ** 6)
        pt = curve_eval(c, u)
        piece = invert_point(pi, pt).u
        if not f1.eval(pt) == f2.eval(pt) == piece == u:
            bad += 1
    report(5, "spline-form equivalence", bad == 0,
           f"p=1, p=2 and piecewise values equal at {200 - bad}/200 points")


def test_criterion_06_pullback_identity(report):
    rng = random.Random(6)
    exact_worst, float_worst, evaluations = 0, 0.0, 0
    for name in FIXTURE_NAMES:
        c, fc = curve(name), curve(name, Backend.FLOAT)
        pi, fpi = inverse(name), inverse(name, Backend.FLOAT)
        us = [F(rng.randint(0, 10 ** 6), 10 ** 6) for _ in range(50)]
        for p in (1, 2, 3):
            pkv = physical_knots(c, p=p)
            U, Uf = pkv.parametric(), pkv.parametric().to_backend(Backend.FLOAT)
            ex = physical_splines(c, pi, pkv, p)
            fl = physical_splines(c, fpi, pkv, p)
            for u in us:
                k = pi.segments[pi.segment_index(u)].k
                pt, fpt = curve_eval(c, u), curve_eval(fc, float(u))
                for se, sf in zip(ex, fl):
                    exact_worst = max(exact_worst, abs(spline_eval(se, pt, k) - bspline_basis(U, p, se.k, u)))
                    fv = spline_eval(sf, fpt, k)
                    float_worst = max(float_worst, abs(fv - bspline_basis(Uf, p, sf.k, float(u))))
                    evaluations += 1
    report(6, "pullback identity", exact_worst == 0 and float_worst < 1e-11,
           f"{evaluations} evaluations, exact max error {exact_worst}, "
           f"float max error {float_worst:.1e} (< 1e-11)")


def test_criterion_07_partition_nonnegativity_support(report):
    rng = random.Random(7)
    part, neg, leak, total = 0, 0, 0, 0
    for name in FIXTURE_NAMES:
        c, pi = curve(name), inverse(name)
        for p in sorted({1, c.degree}):
            pkv = physical_knots(c, p=p)
            splines = physical_splines(c, pi, pkv, p)
            pre = pkv.preimages
            for _ in range(500 if p == c.degree else 100):
                u = F(rng.randint(0, 10 ** 6), 10 ** 6)
                k = pi.segments[pi.segment_index(u)].k
                pt = curve_eval(c, u)
                vals = [spline_eval(s, pt, k) for s in splines]
                part = max(part, abs(sum(vals) - 1))
                neg += sum(v < 0 for v in vals)
                # outside the support window C_k .. C_{k+p} the value must vanish
                leak += sum(v != 0 for s, v in zip(splines, vals)
                            if not pre[s.k] <= u <= pre[s.k + p + 1])
                total += 1
    report(7, "partition, nonnegativity, local support", part == 0 and neg == 0 and leak == 0,
           f"{total} points, partition error {part}, {neg} negative values, "
           f"{leak} nonzero values off support")


def test_criterion_08_quartic_multiplicity(report):
    c, pi = curve("quartic"), inverse("quartic")
    pkv = physical_knots(c, p=3)
    splines = physical_splines(c, pi, pkv, 3)
    reports = [continuity_probe(s, 2) for s in splines]
    jumping = [r for r in reports if r.order == -1]
    persistent = all(min(r.jumps[0]) > 0.5 and r.jumps[0][-1] >= 0.5 * r.jumps[0][0]
                     for r in jumping)
    rt_bad = 0
    for pos, s in enumerate(pi.segments):
        for t in _interior(20):
            u = s.param(t)
            res = invert_point(pi, curve_eval(c, u))
            rt_bad += not (len(res.candidates) == 1 and res.u == u)
    ok = bool(jumping) and persistent and rt_bad == 0
    detail = (f"splines {[splines[reports.index(r)].k for r in jumping]} jump at U_2 with "
              f"order-0 jumps {[round(min(r.jumps[0]), 6) for r in jumping]} for h = 1e-3..1e-5; "
              f"round trip failures on open segments: {rt_bad}/60")
    report(8, "quartic multiplicity", ok, detail)


def test_criterion_09_self_intersection(report):
    fc = curve("quintic", Backend.FLOAT)
    fpi = inverse("quintic", Backend.FLOAT)
    (si,) = self_intersections(fc)
    res = invert_point(fpi, si.point, 1e-8)
    oracle = newton_invert(fc, si.point, OracleConfig(tolerance=1e-8))
    a = sorted(cd.u for cd in res.candidates)
    b = sorted(cd.u for cd in oracle.candidates)
    two = len(a) == 2 and res.multivalued and all(cd.residual < 1e-8 for cd in res.candidates)
    agree = len(a) == len(b) and max(abs(x - y) for x, y in zip(a, b)) < 1e-7
    rng = np.random.default_rng(9)
    singles = 0
    others = [float(u) for u in rng.uniform(0, 1, 400)
              if min(abs(u - si.u1), abs(u - si.u2)) > 1e-3][:100]
    for u in others:
        singles += len(invert_point(fpi, curve_eval(fc, u)).candidates) == 1
    ok = two and agree and singles == 100
    report(9, "self-intersection multivaluedness", ok,
           f"S=({si.point[0]:.12f}, {si.point[1]:.12f}) -> u = {a[0]:.10f}, {a[1]:.10f}, "
           f"max residual {max(cd.residual for cd in res.candidates):.1e}, "
           f"oracle gap {max(abs(x - y) for x, y in zip(a, b)):.1e}; "
           f"{singles}/100 other points single-valued")


def test_criterion_10_closed_form_vs_minors(report):
    c = curve("quadratic")
    mismatches = 0
    from nurbs_inverse.bezier import segment_homogeneous
    for k in (2, 3):
        seg = segment_homogeneous(c, k)
        cf = quadratic_closed_form(c, k)
        mi = local_inverse_from_minors(sylvester(seg), 1, seg)
        for t in [F(j, 49) for j in range(50)]:
            x, y = seg.point(t)
            mismatches += not (cf.eval(x, y) == mi.eval(x, y) == t)
    report(10, "closed form vs minors", mismatches == 0,
           f"{100 - mismatches}/100 on-curve points agree exactly")


def test_criterion_11_oracle_benchmark(report):
    parts, ok = [], True
    for name in ("quadratic", "cubic"):
        rep = bench_compare(curve(name), 10 ** 4, inv=inverse(name))
        ok &= rep.max_disagreement < 1e-7 and not rep.failures
        cf, nw = rep.records
        parts.append(f"{name}: closed_form {cf.mean_ns / 1e3:.1f} us (p99 {cf.p99_ns / 1e3:.1f}), "
                     f"newton {nw.mean_ns / 1e3:.1f} us (p99 {nw.p99_ns / 1e3:.1f}), "
                     f"speedup {rep.speedup:.1f}x, max disagreement {rep.max_disagreement:.1e}")
    report(11, "oracle benchmark", ok, "; ".join(parts))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(pytest.main([__file__, "-q"]))
