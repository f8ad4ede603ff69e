"""Iterative preimage solver used as an independent oracle and as a baseline.

Per Bezier segment, the squared distance ``g(t) = |psi(t) - p|^2`` is
minimised by Newton's method on ``h(t) = (psi(t) - p) . psi'(t)`` (half of
``g'``).  Brackets where ``h`` changes sign are refined with a safeguarded
Newton/bisection step, so a minimum inside a bracket is never missed.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .bezier import bezier_segments
from .bspline import NurbsCurve, curve_eval
from .local_inverse import (Candidate, PiecewiseInverse, PointNotOnCurve, PreimageResult,
                            global_inverse, invert_point)
from .ratpoly import Backend


@dataclass(frozen=True)
class OracleConfig:
    max_iterations: int = 50
    tolerance: float = 1e-9
    seeds_per_segment: int = 5

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.seeds_per_segment < 3:
            raise ValueError("seeds_per_segment must be at least 3")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def _horner3(c, t):
    """Value, first and second derivative of the polynomial ``c`` at ``t``."""
    p = dp = ddp = 0.0
    for a in reversed(c):
        ddp = ddp * t + 2.0 * dp
        dp = dp * t + p
        p = p * t + a
    return p, dp, ddp


class _Segment:
    """Float rational Bezier segment with derivatives of ``psi``."""

    __slots__ = ("k", "u_lo", "u_hi", "c0", "c1", "c2")

    def __init__(self, seg):
        self.k = seg.k
        self.u_lo = float(seg.u_lo)
        self.u_hi = float(seg.u_hi)
        self.c0 = [float(a) for a in seg.f0.coeffs]
        self.c1 = [float(a) for a in seg.f1.coeffs]
        self.c2 = [float(a) for a in seg.f2.coeffs]

    def jet(self, t):
        """``psi``, ``psi'`` and ``psi''`` at ``t`` as three 2-tuples."""
        w, dw, ddw = _horner3(self.c0, t)
        out = []
        for c in (self.c1, self.c2):
            f, df, ddf = _horner3(c, t)
            v = f / w
            dv = (df - v * dw) / w
            ddv = (ddf - 2.0 * dv * dw - v * ddw) / w
            out.append((v, dv, ddv))
        (x, dx, ddx), (y, dy, ddy) = out
        return (x, y), (dx, dy), (ddx, ddy)

    def point(self, t):
        w = _horner3(self.c0, t)[0]
        return _horner3(self.c1, t)[0] / w, _horner3(self.c2, t)[0] / w


def _h(seg, t, px, py):
    (x, y), (dx, dy), (ddx, ddy) = seg.jet(t)
    ex, ey = x - px, y - py
    h = ex * dx + ey * dy
    dh = dx * dx + dy * dy + ex * ddx + ey * ddy
    return h, dh, ex * ex + ey * ey


def _newton(seg, t, px, py, cfg, lo=None, hi=None):
    """Newton on ``h``; with a bracket ``[lo, hi]`` steps leaving it bisect."""
    for _ in range(cfg.max_iterations):
        h, dh, _ = _h(seg, t, px, py)
        if lo is not None:
            if h == 0.0:
                return t
            if (h < 0) == (_h(seg, lo, px, py)[0] < 0):
                lo = t
            else:
                hi = t
        step = h / dh if dh != 0.0 else math.inf
        nt = t - step
        if lo is not None and not (lo <= nt <= hi) or not math.isfinite(nt):
            if lo is None:
                return None
            nt = 0.5 * (lo + hi)
        if lo is None and not -0.5 <= nt <= 1.5:
            return None
        if abs(nt - t) <= 1e-15 * max(1.0, abs(t)):
            return nt
        t = nt
    return t


def _segment_minima(seg, px, py, cfg):
    n = cfg.seeds_per_segment
    seeds = [j / (n - 1) for j in range(n)]
    hs = [_h(seg, s, px, py)[0] for s in seeds]
    found = [0.0, 1.0]
    for a, b, ha, hb in zip(seeds, seeds[1:], hs, hs[1:]):
        if ha == 0.0:
            found.append(a)
        elif (ha < 0) != (hb < 0):
            t = _newton(seg, 0.5 * (a + b), px, py, cfg, a, b)
            if t is not None:
                found.append(t)
    for s in seeds:
        t = _newton(seg, s, px, py, cfg)
        if t is not None and 0.0 <= t <= 1.0:
            found.append(t)
    return found


def _float_segments(c: NurbsCurve):
    return [_Segment(s) for s in bezier_segments(c.exact())]


def newton_invert(c: NurbsCurve, point, cfg: OracleConfig | None = None,
                  _segments=None) -> PreimageResult:
    """All parameters whose curve point lies within ``cfg.tolerance`` of ``point``.

    Same result shape as :func:`invert_point`: candidates sorted by
    residual, coincident parameters (within ``10 * tolerance``) merged onto
    the segment owning them.
    """
    cfg = cfg or OracleConfig()
    segs = _segments if _segments is not None else _float_segments(c)
    px, py = float(point[0]), float(point[1])
    tol = cfg.tolerance
    hits = []
    for seg in segs:
        for t in _segment_minima(seg, px, py, cfg):
            x, y = seg.point(t)
            sq = (x - px) ** 2 + (y - py) ** 2
            if sq <= tol * tol:
                hits.append((seg.u_lo + t * (seg.u_hi - seg.u_lo), seg, sq))
    if not hits:
        raise PointNotOnCurve(f"point ({px}, {py}) is not on the curve within {tol}")
    hits.sort(key=lambda h: h[0])
    merged = []
    for u, seg, sq in hits:
        if merged and u - merged[-1][0] <= 10 * tol:
            # keep the best residual, attributed to the half-open owner
            pu, pseg, psq = merged[-1]
            best = (u, sq) if sq < psq else (pu, psq)
            owner = seg if u >= seg.u_lo and (u < seg.u_hi or seg is segs[-1]) else pseg
            merged[-1] = (best[0], owner, best[1])
            continue
        merged.append((u, seg, sq))
    cands = sorted((Candidate(u, seg.k, math.sqrt(sq)) for u, seg, sq in merged),
                   key=lambda cd: cd.residual)
    return PreimageResult(tuple(cands), len(cands) >= 2)


@dataclass(frozen=True)
class BenchRecord:
    name: str
    points: int
    mean_ns: float
    p99_ns: float
    max_disagreement: float


@dataclass
class BenchReport:
    records: list = field(default_factory=list)
    failures: dict = field(default_factory=dict)

    @property
    def speedup(self) -> float | None:
        """Mean Newton time over mean closed-form time."""
        by = {r.name: r for r in self.records}
        if "closed_form" not in by or "newton" not in by or not by["closed_form"].mean_ns:
            return None
        return by["newton"].mean_ns / by["closed_form"].mean_ns

    @property
    def max_disagreement(self) -> float:
        return max((r.max_disagreement for r in self.records), default=0.0)

    def to_text(self) -> str:
        lines = [f"name={r.name} points={r.points} mean_ns={r.mean_ns:.0f} "
                 f"p99_ns={r.p99_ns:.0f} max_disagreement={r.max_disagreement:.3e}"
                 for r in self.records]
        if self.speedup is not None:
            lines.append(f"speedup={self.speedup:.2f}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({"records": [asdict(r) for r in self.records],
                           "speedup": self.speedup, "failures": self.failures})


def _set_distance(a, b) -> float:
    """Symmetric Hausdorff distance between two parameter sets."""
    if not a or not b:
        return math.inf
    return max(max(min(abs(x - y) for y in b) for x in a),
               max(min(abs(x - y) for y in a) for x in b))


def bench_compare(c: NurbsCurve, n_points: int, cfg: OracleConfig | None = None,
                  inv: PiecewiseInverse | None = None, seed: int = 0) -> BenchReport:
    """Time closed-form inversion against :func:`newton_invert`.

    ``n_points`` on-curve points come from uniformly random parameters.
    Both methods run on each point in turn; per-point wall times are kept
    and summarised.  The disagreement is the Hausdorff distance between the
    two candidate sets.
    """
    cfg = cfg or OracleConfig()
    if n_points <= 0:
        return BenchReport()
    fc = c.to_backend(Backend.FLOAT)
    inv = (inv or global_inverse(c)).to_backend(Backend.FLOAT)
    segs = _float_segments(c)
    lo, hi = (float(v) for v in fc.domain)
    us = np.random.default_rng(seed).uniform(lo, hi, n_points)
    pts = [curve_eval(fc, float(u)) for u in us]
    t_closed = np.empty(n_points)
    t_newton = np.empty(n_points)
    worst = 0.0
    fails = {"closed_form": 0, "newton": 0}
    for i, p in enumerate(pts):
        t0 = time.perf_counter_ns()
        try:
            a = [cd.u for cd in invert_point(inv, p, cfg.tolerance).candidates]
        except PointNotOnCurve:
            a = []
            fails["closed_form"] += 1
        t1 = time.perf_counter_ns()
        try:
            b = [cd.u for cd in newton_invert(fc, p, cfg, segs).candidates]
        except PointNotOnCurve:
            b = []
            fails["newton"] += 1
        t2 = time.perf_counter_ns()
        t_closed[i] = t1 - t0
        t_newton[i] = t2 - t1
        worst = max(worst, _set_distance(a, b))
    recs = [BenchRecord(name, n_points, float(t.mean()), float(np.percentile(t, 99)), worst)
            for name, t in (("closed_form", t_closed), ("newton", t_newton))]
    return BenchReport(recs, {k: v for k, v in fails.items() if v})


@dataclass(frozen=True)
class SelfIntersection:
    u1: float
    u2: float
    point: tuple


def self_intersections(c: NurbsCurve, samples_per_segment: int = 200,
                       min_separation: float = 1e-6) -> list[SelfIntersection]:
    """Transversal self-intersections found by polyline crossing and 2D Newton.

    The curve is sampled into a polyline; every crossing of two
    non-adjacent polyline edges seeds Newton on ``phi(u1) - phi(u2) = 0``.
    """
    segs = _float_segments(c)
    us, pts, owner = [], [], []
    for idx, s in enumerate(segs):
        ts = np.linspace(0.0, 1.0, samples_per_segment + 1)
        if idx:
            ts = ts[1:]
        for t in ts:
            us.append(s.u_lo + t * (s.u_hi - s.u_lo))
            pts.append(s.point(float(t)))
            owner.append(idx)
    P = np.asarray(pts)
    A, B = P[:-1], P[1:]
    n = len(A)
    d = B - A
    i, j = np.triu_indices(n, k=2)
    # segment-segment crossing via the cross-product test
    r, s_ = d[i], d[j]
    q = A[j] - A[i]
    den = r[:, 0] * s_[:, 1] - r[:, 1] * s_[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        ta = (q[:, 0] * s_[:, 1] - q[:, 1] * s_[:, 0]) / den
        tb = (q[:, 0] * r[:, 1] - q[:, 1] * r[:, 0]) / den
    hit = (den != 0) & (ta >= 0) & (ta < 1) & (tb >= 0) & (tb < 1)
    uarr = np.asarray(us)
    found = []
    for a, b, sa, sb in zip(i[hit], j[hit], ta[hit], tb[hit]):
        u1 = float(uarr[a] + sa * (uarr[a + 1] - uarr[a]))
        u2 = float(uarr[b] + sb * (uarr[b + 1] - uarr[b]))
        res = _refine_pair(segs, u1, u2)
        if res is None:
            continue
        u1, u2 = res
        if abs(u2 - u1) < min_separation:
            continue
        if any(abs(u1 - f.u1) < 1e-9 and abs(u2 - f.u2) < 1e-9 for f in found):
            continue
        found.append(SelfIntersection(u1, u2, _seg_at(segs, u1).point(_local(segs, u1))))
    return found


def _seg_at(segs, u):
    for s in segs:
        if s.u_lo <= u < s.u_hi:
            return s
    return segs[-1] if u >= segs[-1].u_lo else segs[0]


def _local(segs, u):
    s = _seg_at(segs, u)
    return (u - s.u_lo) / (s.u_hi - s.u_lo)


def _refine_pair(segs, u1, u2, iters=60):
    lo, hi = segs[0].u_lo, segs[-1].u_hi
    for _ in range(iters):
        s1, s2 = _seg_at(segs, u1), _seg_at(segs, u2)
        (x1, y1), (dx1, dy1), _ = s1.jet(_local(segs, u1))
        (x2, y2), (dx2, dy2), _ = s2.jet(_local(segs, u2))
        # chain rule from local t to global u
        j1 = 1.0 / (s1.u_hi - s1.u_lo)
        j2 = 1.0 / (s2.u_hi - s2.u_lo)
        fx, fy = x1 - x2, y1 - y2
        a, b, cc, dd = dx1 * j1, -dx2 * j2, dy1 * j1, -dy2 * j2
        det = a * dd - b * cc
        if det == 0.0:
            return None
        du1 = (fx * dd - b * fy) / det
        du2 = (a * fy - cc * fx) / det
        u1, u2 = u1 - du1, u2 - du2
        if not (lo <= u1 <= hi and lo <= u2 <= hi):
            return None
        if abs(du1) + abs(du2) < 1e-15:
            break
    return (u1, u2) if u1 < u2 else (u2, u1)
