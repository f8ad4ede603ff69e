"""Local rational inverses from Sylvester minors and the global piecewise inverse.

For a Bezier segment with homogeneous components ``(f0, f1, f2)`` put
``X(t) = f1(t) - x f0(t)`` and ``Y(t) = f2(t) - y f0(t)``.  At a point of the
segment the Sylvester matrix of ``X`` and ``Y`` drops rank, and its left kernel
is spanned by the moment vector ``(1, t, ..., t^(2d-1))`` (with ``a_0`` at the
top of each column, as laid out below).  Consecutive signed maximal minors
that share a deleted column are proportional to consecutive entries of that
vector, so their ratio recovers ``t`` as a rational function of ``(x, y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction

from .bezier import BezierSegment, bezier_segments, quadratic_weighted_matrix, segment_homogeneous
from .bspline import NurbsCurve
from .ratpoly import (Backend, BivariatePoly, PolyMatrix, _check_arg, det_poly, parse_scalar,
                      to_scalar, zero)


class NonGeneralSegment(ValueError):
    """No consecutive minor pair inverts the segment: the curve is not general there."""

    def __init__(self, k, message=""):
        super().__init__(message or f"segment {k} is not general")
        self.k = k


class PointNotOnCurve(ValueError):
    pass


@dataclass(frozen=True)
class SylvesterPencil:
    k: int
    d: int
    matrix: PolyMatrix


def sylvester(seg: BezierSegment) -> SylvesterPencil:
    """``2d x 2d`` Sylvester matrix of ``X(t)`` and ``Y(t)``.

    Column ``j < d`` carries the coefficients of ``X`` from ``a_0`` at row
    ``j`` downwards; the right block does the same for ``Y``.
    """
    d = seg.d
    be = seg.backend
    X = [BivariatePoly.linear(seg.f1.coefficient(p), -seg.f0.coefficient(p), 0, be)
         for p in range(d + 1)]
    Y = [BivariatePoly.linear(seg.f2.coefficient(p), 0, -seg.f0.coefficient(p), be)
         for p in range(d + 1)]
    size = 2 * d
    zero_poly = BivariatePoly({}, be)
    rows = [[zero_poly] * size for _ in range(size)]
    for j in range(d):
        for p in range(d + 1):
            rows[j + p][j] = X[p]
            rows[j + p][d + j] = Y[p]
    return SylvesterPencil(seg.k, d, PolyMatrix(rows))


def signed_minor(m: PolyMatrix, row: int, col: int) -> BivariatePoly:
    """``(-1)^(row+col)`` times the minor without ``row`` and ``col`` (1-based)."""
    sub = m.minor(row - 1, col - 1)
    det = det_poly(sub) if sub is not None else BivariatePoly.const(1, m.backend)
    return det if (row + col) % 2 == 0 else -det


@dataclass
class LocalInverse:
    """``t = numerator(x, y) / denominator(x, y)`` on one segment.

    ``numerator`` is the signed minor without row ``row + 1`` and
    ``denominator`` the one without row ``row``, both without ``column``.
    ``alternates`` are further (numerator, denominator) pairs tried where the
    primary pair evaluates to 0/0.  Float copies store the polynomials in
    coordinates relative to ``origin`` (a point near the segment), which
    keeps cancellation in the evaluation small, and keep the exact pairs in
    ``exact_pairs`` for points where every float pair cancels badly.
    """

    k: int
    numerator: BivariatePoly
    denominator: BivariatePoly
    row: int
    column: int
    alternates: list = field(default_factory=list)
    origin: tuple = (0, 0)
    exact_pairs: tuple = ()

    @property
    def backend(self) -> Backend:
        return self.numerator.backend

    def pairs(self):
        yield self.numerator, self.denominator
        yield from self.alternates

    def eval(self, x, y):
        """Local parameter at ``(x, y)``, or ``None`` where every pair is 0/0."""
        if self.backend is Backend.EXACT:
            if self.origin != (0, 0):
                x, y = x - self.origin[0], y - self.origin[1]
            for num, den in self.pairs():
                dv = den.eval(x, y)
                if dv != 0:
                    return num.eval(x, y) / dv
            return None
        X, Y = x - self.origin[0], y - self.origin[1]
        best = None
        for num, den in self.pairs():
            dv, scale = _eval_with_scale(den, X, Y)
            # relative size of the denominator against its own terms; a small
            # one means cancellation, so prefer a better-conditioned pair
            rel = abs(dv) / scale if scale else 0.0
            if rel > 1e-2:
                return num.eval(X, Y) / dv
            if dv != 0 and (best is None or rel > best[0]):
                best = (rel, num.eval(X, Y) / dv)
        if self.exact_pairs:
            # near a singular point of the implicit curve: evaluate exactly at the float input
            fx, fy = Fraction(x), Fraction(y)
            for num, den in self.exact_pairs:
                dv = den.eval(fx, fy)
                if dv != 0:
                    return float(num.eval(fx, fy) / dv)
        return None if best is None else best[1]

    def absolute_pairs(self) -> list:
        """``(numerator, denominator)`` pairs in plain ``(x, y)`` coordinates."""
        ox, oy = self.origin
        if (ox, oy) == (0, 0):
            return list(self.pairs())
        return [(n.translated(-ox, -oy), d.translated(-ox, -oy)) for n, d in self.pairs()]

    def to_backend(self, backend: Backend, origin=None) -> "LocalInverse":
        """Copy in ``backend``; a float copy is recentred at ``origin`` if given."""
        if backend is self.backend and origin is None:
            return self
        if self.exact_pairs:
            absolute = list(self.exact_pairs)
        else:
            absolute = [(n.to_backend(Backend.EXACT), d.to_backend(Backend.EXACT))
                        for n, d in self.absolute_pairs()]
        pairs, new_origin, exact_pairs = absolute, (0, 0), ()
        if backend is Backend.FLOAT:
            exact_pairs = tuple(absolute)
            if origin is not None:
                # round the centre to floats so the subtraction at eval time is consistent
                ox, oy = Fraction(float(origin[0])), Fraction(float(origin[1]))
                pairs = [(n.translated(ox, oy), d.translated(ox, oy)) for n, d in absolute]
                new_origin = (float(ox), float(oy))
        conv = [_normalised(n, d, backend) for n, d in pairs]
        return LocalInverse(self.k, conv[0][0], conv[0][1], self.row, self.column,
                            conv[1:], new_origin, exact_pairs)


def _normalised(num, den, backend):
    # scale both by the same power of two so float coefficients stay moderate
    big = max(num.max_abs_coeff(), den.max_abs_coeff())
    if big and backend is Backend.FLOAT:
        shift = -math.frexp(float(big))[1]
        factor = Fraction(2) ** shift
        return num.scaled(factor).to_backend(backend), den.scaled(factor).to_backend(backend)
    return num.to_backend(backend), den.to_backend(backend)


def _eval_with_scale(p: BivariatePoly, x, y):
    items, _, _ = p._compile()
    val = 0.0
    scale = 0.0
    ax, ay = abs(x), abs(y)
    for (a, b), c in items:
        term = c * x ** a * y ** b
        val += term
        scale += abs(c) * ax ** a * ay ** b
    return val, scale


def _sample_params(d: int, count: int):
    return [Fraction(j + 1, count + 1) for j in range(count)]


def validate_pair(seg: BezierSegment, num: BivariatePoly, den: BivariatePoly,
                  samples=None) -> bool:
    """Round trip ``num/den (psi(t)) == t`` at interior sample parameters."""
    if den.is_zero():
        return False
    samples = samples or _sample_params(seg.d, seg.d + 2)
    good = 0
    for t in samples:
        x, y = seg.point(t)
        dv = den.eval(x, y)
        if dv == 0:
            continue
        if num.eval(x, y) / dv != t:
            return False
        good += 1
    return good >= max(1, len(samples) - 1)


def local_inverse_from_minors(p: SylvesterPencil, i: int = 1,
                              seg: BezierSegment | None = None) -> LocalInverse:
    """Local inverse from the signed minor pair at rows ``i, i+1`` (1-based).

    The last column is deleted.  When ``seg`` is given, pairs are validated by
    the round trip and the search moves on to the next row, then to the last
    column of the ``X`` block, until one passes.  A second valid pair with the
    other column is kept as an alternate for points where the first is 0/0.
    """
    d = p.d
    size = 2 * d
    if not 1 <= i <= size - 1:
        raise ValueError(f"row index must lie in 1..{size - 1}")
    cache = {}

    def minor(r, c):
        if (r, c) not in cache:
            cache[(r, c)] = signed_minor(p.matrix, r, c)
        return cache[(r, c)]

    found = []
    for col in (size, d):
        rows = list(range(i, size)) + list(range(1, i))
        for r in rows:
            num, den = minor(r + 1, col), minor(r, col)
            if seg is None:
                if not den.is_zero():
                    found.append((r, col, num, den))
                    break
                continue
            if validate_pair(seg, num, den):
                found.append((r, col, num, den))
                break
        if seg is None and found:
            break
    if not found:
        raise NonGeneralSegment(p.k, f"segment {p.k}: every Sylvester minor pair degenerates")
    r, col, num, den = found[0]
    alts = [(n, dd) for _, _, n, dd in found[1:]]
    return LocalInverse(p.k, num, den, r, col, alts)


def collinearity(c: NurbsCurve, k: int):
    """``det(P_{k-2}, P_{k-1}, P_k)`` of lifted points; zero means collinear."""
    (x0, y0), (x1, y1), (x2, y2) = c.control_points[k - 2:k + 1]
    return (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def quadratic_closed_form(c: NurbsCurve, k: int) -> LocalInverse:
    """Degree-2 inverse from column-replaced 3x3 determinants.

    ``rho`` collects the lines ``det(P_j, P_l, (1, x, y))`` through pairs of
    the three active (unweighted, lifted) control points, middle entry
    negated, so that ``rho`` evaluated at ``P_m`` is ``Delta`` times the
    ``m``-th unit vector.  With ``M = W S^T`` (weights on the rows of the
    transposed quadratic extraction matrix), replacing column ``i`` of ``M``
    by ``rho`` gives ``D_i`` proportional to the Bernstein value ``B_i(t)``.
    Hence ``t = (D_2/2) / (D_2/2 + D_1) = D_3 / (D_3 + D_2/2)``; the first
    form is 0/0 at ``t = 1`` and the second at ``t = 0``, so the second is
    kept as the alternate pair.  The result is the local chart parameter.
    """
    if c.degree != 2:
        raise ValueError("quadratic_closed_form needs a degree-2 curve")
    if collinearity(c, k) == 0:
        raise NonGeneralSegment(k, f"segment {k}: control points {k - 2}..{k} are collinear")
    be = c.backend
    pts = [(1, x, y) for x, y in c.control_points[k - 2:k + 1]]

    def line(a, b):
        # det(a, b, (1, x, y)) as a linear polynomial
        c0 = a[1] * b[2] - a[2] * b[1]
        cx = -(a[0] * b[2] - a[2] * b[0])
        cy = a[0] * b[1] - a[1] * b[0]
        return BivariatePoly.linear(c0, cx, cy, be)

    rho = [line(pts[1], pts[2]), -line(pts[0], pts[2]), line(pts[0], pts[1])]
    S = quadratic_weighted_matrix(c, k, weighted=False)
    w = c.weights[k - 2:k + 1]
    M = [[BivariatePoly.const(w[i] * S[j][i], be) for j in range(3)] for i in range(3)]

    def replaced(col):
        return _det3([[rho[r] if cc == col else M[r][cc] for cc in range(3)] for r in range(3)])

    D1, D2, D3 = replaced(0), replaced(1), replaced(2)
    half = Fraction(1, 2) if be is Backend.EXACT else 0.5
    num1, den1 = D2.scaled(half), D2.scaled(half) + D1
    num2, den2 = D3, D3 + D2.scaled(half)
    return LocalInverse(k, num1, den1, 0, 0, [(num2, den2)])


@dataclass(frozen=True)
class PiecewiseSegment:
    k: int
    u_lo: object
    u_hi: object
    local: LocalInverse
    bezier: BezierSegment

    def global_rational(self):
        """``(u_lo * D + (u_hi - u_lo) * N, D)``: the inverse in global parameters."""
        N, D = self.local.absolute_pairs()[0]
        return D.scaled(self.u_lo) + N.scaled(self.u_hi - self.u_lo), D

    def param(self, t):
        return self.u_lo + (self.u_hi - self.u_lo) * t

    @cached_property
    def bbox(self):
        """Bounding box of the Bezier control points; it contains the segment."""
        pts = [(q[1] / q[0], q[2] / q[0]) for q in self.bezier.bernstein]
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        return min(xs), min(ys), max(xs), max(ys)


@dataclass(frozen=True)
class PiecewiseInverse:
    """Inverse map assembled from one local inverse per active interval."""

    curve: NurbsCurve
    segments: tuple
    backend: Backend

    def segment_index(self, u) -> int:
        """Position in ``segments`` owning ``u`` (half-open, last owns the end)."""
        for pos, s in enumerate(self.segments):
            if s.u_lo <= u < s.u_hi:
                return pos
        if u == self.segments[-1].u_hi:
            return len(self.segments) - 1
        raise ValueError(f"parameter {u} outside the curve domain")

    def eval_on_segment(self, pos: int, x, y):
        """Global parameter of ``(x, y)`` using the local inverse of segment ``pos``."""
        s = self.segments[pos]
        t = s.local.eval(x, y)
        return None if t is None else s.param(t)

    def __call__(self, x, y, tol=None):
        res = invert_point(self, (x, y), tol)
        return res.candidates[0].u

    def to_backend(self, backend: Backend) -> "PiecewiseInverse":
        if backend is self.backend:
            return self
        conv = float if backend is Backend.FLOAT else Fraction
        segs = tuple(PiecewiseSegment(s.k, conv(s.u_lo), conv(s.u_hi),
                                      s.local.to_backend(backend, _centre(s.bezier)
                                                         if backend is Backend.FLOAT else None),
                                      s.bezier.to_backend(backend))
                     for s in self.segments)
        return PiecewiseInverse(self.curve.to_backend(backend), segs, backend)

    def eval_array(self, pos: int, xs, ys):
        """Vectorised global parameters on segment ``pos`` (float only)."""
        import numpy as np
        s = self.segments[pos]
        ox, oy = s.local.origin
        xs = np.asarray(xs, dtype=float) - ox
        ys = np.asarray(ys, dtype=float) - oy
        num = s.local.numerator.eval_array(xs, ys)
        den = s.local.denominator.eval_array(xs, ys)
        with np.errstate(divide="ignore", invalid="ignore"):
            t = num / den
        return float(s.u_lo) + (float(s.u_hi) - float(s.u_lo)) * t


def _centre(seg: BezierSegment):
    """Centroid of the segment's Bezier control points."""
    pts = [(q[1] / q[0], q[2] / q[0]) for q in seg.bernstein]
    return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))


def global_inverse(c: NurbsCurve, backend: Backend | None = None) -> PiecewiseInverse:
    """Piecewise rational inverse of ``c``.

    Construction is always carried out with exact coefficients; a float
    ``backend`` (the default for float curves) converts the finished minors.
    """
    backend = backend or c.backend
    exact = c.exact()
    segs = []
    for seg in bezier_segments(exact):
        pencil = sylvester(seg)
        local = local_inverse_from_minors(pencil, 1, seg)
        segs.append(PiecewiseSegment(seg.k, seg.u_lo, seg.u_hi, local, seg))
    pi = PiecewiseInverse(exact, tuple(segs), Backend.EXACT)
    return pi.to_backend(backend)


@dataclass(frozen=True)
class Candidate:
    u: object
    segment: int  # knot-interval index k
    residual: float


@dataclass(frozen=True)
class PreimageResult:
    candidates: tuple
    multivalued: bool

    @property
    def u(self):
        return self.candidates[0].u


def invert_point(pi: PiecewiseInverse, point, tol=None) -> PreimageResult:
    """All parameters of ``pi.curve`` mapping to ``point`` within ``tol``.

    Every segment's local inverse is evaluated; a candidate survives when its
    local parameter lies in ``[-tol, 1 + tol]`` (then clamped to ``[0, 1]``)
    and the curve point at the resulting parameter is within ``tol`` of
    ``point``.  Candidates that coincide (a shared knot image) collapse onto
    the segment owning the parameter.  Results are sorted by residual.
    """
    be = pi.backend
    if tol is None:
        tol = 1e-9
    if be is Backend.EXACT:
        tol = parse_scalar(tol)
    else:
        tol = float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = _check_arg(point[0], be) if not isinstance(point[0], str) else to_scalar(point[0], be)
    y = _check_arg(point[1], be) if not isinstance(point[1], str) else to_scalar(point[1], be)
    found = []
    for pos, s in enumerate(pi.segments):
        x0, y0, x1, y1 = s.bbox
        if not (x0 - tol <= x <= x1 + tol and y0 - tol <= y <= y1 + tol):
            continue
        t = s.local.eval(x, y)
        if t is None or t < -tol or t > 1 + tol:
            continue
        t = min(max(t, zero(be)), zero(be) + 1)
        px, py = s.bezier.point(t)
        sq = (px - x) ** 2 + (py - y) ** 2
        if sq > tol * tol:
            continue
        found.append((s.param(t), pos, sq))
    if not found:
        raise PointNotOnCurve(f"point ({x}, {y}) is not on the curve within {tol}")
    merged = []
    for u, pos, sq in sorted(found, key=lambda f: f[0]):
        if merged and abs(u - merged[-1][0]) <= (0 if be is Backend.EXACT else 10 * tol):
            prev = merged[-1]
            owner = pi.segment_index(min(max(u, pi.segments[0].u_lo), pi.segments[-1].u_hi))
            if pos == owner and prev[1] != owner:
                merged[-1] = (u, pos, sq)
            continue
        merged.append((u, pos, sq))
    cands = sorted((Candidate(u, pi.segments[pos].k, math.sqrt(float(sq))) for u, pos, sq in merged),
                   key=lambda cd: cd.residual)
    return PreimageResult(tuple(cands), len(cands) >= 2)


@dataclass(frozen=True)
class SegmentReport:
    k: int
    general: bool
    details: str


def genericity_check(c: NurbsCurve) -> list[SegmentReport]:
    """Per-segment genericity report.

    Degree 2 uses the collinearity of the three active control points; every
    degree also needs a minor pair passing the round trip at ``d + 2``
    interior parameters.
    """
    exact = c.exact()
    out = []
    for k, _, _ in exact.active_intervals():
        if exact.degree == 2 and collinearity(exact, k) == 0:
            out.append(SegmentReport(k, False, f"control points {k - 2}..{k} are collinear"))
            continue
        seg = segment_homogeneous(exact, k)
        try:
            local = local_inverse_from_minors(sylvester(seg), 1, seg)
        except NonGeneralSegment as exc:
            out.append(SegmentReport(k, False, str(exc)))
            continue
        out.append(SegmentReport(k, True, f"minor rows {local.row},{local.row + 1}, "
                                          f"column {local.column}"))
    return out
