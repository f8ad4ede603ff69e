"""Physical rational splines: B-spline-like functions living on the curve.

A physical knot vector repeats knot images ``U_j = phi(u_j)`` on the curve.
The Cox-de Boor recursion is run with ``phi^{-1}(x, y)`` in place of the
parameter, so on each curve segment a physical spline is a polynomial in the
segment's rational inverse.  Branches are stored as polynomials in
``s = phi^{-1}(x, y)`` and composed into explicit rational functions of
``(x, y)`` on request.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb

from .bspline import KnotVector, NurbsCurve, curve_eval, greville, reduced_knots
from .local_inverse import PiecewiseInverse, global_inverse, invert_point
from .ratpoly import Backend, BivariatePoly, UnivariatePoly, zero


@dataclass(frozen=True)
class PhysicalKnotVector:
    """Knot images on the curve with repetitions.

    ``points[j] == phi(preimages[j])``; the preimages are kept so the
    recursion never has to invert a knot image (which may be ambiguous).
    """

    points: tuple
    preimages: tuple
    multiplicities: tuple

    def __len__(self):
        return len(self.points)

    @property
    def distinct_points(self):
        out = []
        for p in self.points:
            if not out or out[-1] != p:
                out.append(p)
        return out

    @property
    def distinct_preimages(self):
        out = []
        for u in self.preimages:
            if not out or out[-1] != u:
                out.append(u)
        return out

    def parametric(self) -> KnotVector:
        """The matching parametric knot vector (same values, same repetitions)."""
        return KnotVector(self.preimages)


def default_multiplicities(c: NurbsCurve, p: int) -> list[int]:
    """Multiplicities of the curve's knots, with ends set to ``p + 1`` and
    inner ones capped at ``p + 1``."""
    _, mults = reduced_knots(c.knots)
    out = [min(mu, p + 1) for mu in mults]
    out[0] = out[-1] = p + 1
    return out


def physical_knots(c: NurbsCurve, multiplicities=None, p: int | None = None) -> PhysicalKnotVector:
    """Physical knot vector of ``c``.

    Without ``multiplicities`` the curve's own knot multiplicities are used
    (inner ones capped at ``p + 1`` when ``p`` is given).  Passing ``p`` sets
    the end multiplicities to ``p + 1``.
    """
    exact = c.exact()
    distinct, mults = reduced_knots(exact.knots)
    if multiplicities is None:
        multiplicities = default_multiplicities(exact, p) if p is not None else mults
    multiplicities = list(multiplicities)
    if len(multiplicities) != len(distinct):
        raise ValueError(f"expected {len(distinct)} multiplicities (one per distinct knot), "
                         f"got {len(multiplicities)}")
    if any(mu < 1 for mu in multiplicities):
        raise ValueError("multiplicities must be positive")
    if p is not None:
        multiplicities[0] = multiplicities[-1] = p + 1
    pts, pre = [], []
    for u, mu in zip(distinct, multiplicities):
        q = curve_eval(exact, u)
        pts.extend([q] * mu)
        pre.extend([u] * mu)
    return PhysicalKnotVector(tuple(pts), tuple(pre), tuple(multiplicities))


def _interval_to_segment(pi: PiecewiseInverse, pkv: PhysicalKnotVector) -> dict:
    """Map nondegenerate physical knot intervals to positions in ``pi.segments``."""
    out = {}
    pre = pkv.preimages
    if pi.backend is Backend.FLOAT:
        pre = [float(u) for u in pre]
    for j in range(len(pre) - 1):
        if pre[j + 1] > pre[j]:
            for pos, s in enumerate(pi.segments):
                if s.u_lo == pre[j] and s.u_hi == pre[j + 1]:
                    out[j] = pos
                    break
            else:
                raise ValueError(f"physical interval {j} matches no curve segment")
    return out


def _recursion(pkv: PhysicalKnotVector, seg_of: dict, k: int, p: int, memo: dict) -> dict:
    """Branches ``{segment position: polynomial in s}`` of the degree-``p`` spline ``k``."""
    key = (k, p)
    if key in memo:
        return memo[key]
    if p == 0:
        out = {seg_of[k]: UnivariatePoly([1])} if k in seg_of else {}
        memo[key] = out
        return out
    s_ = pkv.preimages
    out = {}
    s_poly = UnivariatePoly([0, 1])
    # each quotient is dropped when its denominator vanishes (0/0 = 0)
    den = s_[k + p] - s_[k]
    if den != 0:
        factor = (s_poly - s_[k]) * (Fraction(1) / den)
        for pos, poly in _recursion(pkv, seg_of, k, p - 1, memo).items():
            out[pos] = out.get(pos, UnivariatePoly()) + factor * poly
    den = s_[k + p + 1] - s_[k + 1]
    if den != 0:
        factor = (s_[k + p + 1] - s_poly) * (Fraction(1) / den)
        for pos, poly in _recursion(pkv, seg_of, k + 1, p - 1, memo).items():
            out[pos] = out.get(pos, UnivariatePoly()) + factor * poly
    out = {pos: poly for pos, poly in out.items() if not poly.is_zero()}
    memo[key] = out
    return out


def _compose(poly: UnivariatePoly, num: BivariatePoly, den: BivariatePoly, p: int):
    """``poly(num/den)`` as ``(sum c_i num^i den^(p-i), den^p)``."""
    poly = poly.to_backend(num.backend)
    total = BivariatePoly({}, num.backend)
    num_pows = [BivariatePoly.const(1, num.backend)]
    den_pows = [BivariatePoly.const(1, num.backend)]
    for _ in range(p):
        num_pows.append(num_pows[-1] * num)
        den_pows.append(den_pows[-1] * den)
    for i, c in enumerate(poly.coeffs):
        if c != 0:
            total = total + (num_pows[i] * den_pows[p - i]).scaled(c)
    return total, den_pows[p]


@dataclass
class PhysicalSpline:
    """``N_{k,p}`` on the curve, one polynomial in ``phi^{-1}`` per segment."""

    k: int
    p: int
    branches: dict  # segment position -> UnivariatePoly in the global parameter
    inverse: PiecewiseInverse
    knots: PhysicalKnotVector
    _float_branches: dict = field(default=None, repr=False)

    @property
    def support(self) -> list[int]:
        """Knot-interval indices ``k`` of the segments where the spline is nonzero."""
        return sorted(self.inverse.segments[pos].k for pos in self.branches)

    def rational(self, pos: int):
        """Explicit ``(numerator, denominator)`` in ``(x, y)`` on segment ``pos``.

        Returns ``None`` off the support.
        """
        if pos not in self.branches:
            return None
        N, D = self.inverse.segments[pos].global_rational()
        return _compose(self.branches[pos], N, D, self.p)

    def branch_value(self, pos: int, u):
        """Value on segment ``pos`` at global parameter ``u``."""
        poly = self.branches.get(pos)
        if poly is None:
            return zero(self.inverse.backend)
        if self.inverse.backend is Backend.FLOAT:
            if self._float_branches is None:
                self._float_branches = {q: b.to_backend(Backend.FLOAT)
                                        for q, b in self.branches.items()}
            return self._float_branches[pos].eval(float(u))
        return poly.eval(u)


def _locate(inv: PiecewiseInverse, point, segment_hint, tol):
    """``(segment position, global parameter)`` of a curve point."""
    if segment_hint is None:
        res = invert_point(inv, point, tol)
        cand = res.candidates[0]
        pos = next(i for i, s in enumerate(inv.segments) if s.k == cand.segment)
        return pos, cand.u
    pos = next((i for i, s in enumerate(inv.segments) if s.k == segment_hint), None)
    if pos is None:
        raise ValueError(f"segment hint {segment_hint} is not an active interval")
    u = inv.eval_on_segment(pos, point[0], point[1])
    if u is None:
        raise ValueError(f"local inverse of segment {segment_hint} is 0/0 at {point}")
    return pos, u


def physical_spline(c: NurbsCurve, inv: PiecewiseInverse, pkv: PhysicalKnotVector,
                    k: int, p: int, _memo=None) -> PhysicalSpline:
    """The ``k``-th physical rational spline of degree ``p`` on ``pkv``."""
    M = len(pkv) - 1
    if p < 0 or not 0 <= k <= M - p - 1:
        raise IndexError(f"spline index {k} out of range 0..{M - p - 1} for degree {p}")
    seg_of = _interval_to_segment(inv, pkv)
    memo = {} if _memo is None else _memo
    branches = _recursion(pkv, seg_of, k, p, memo)
    return PhysicalSpline(k, p, dict(branches), inv, pkv)


def physical_splines(c: NurbsCurve, inv: PiecewiseInverse, pkv: PhysicalKnotVector,
                     p: int) -> list[PhysicalSpline]:
    memo = {}
    return [physical_spline(c, inv, pkv, k, p, memo) for k in range(len(pkv) - p - 1)]


def spline_eval(s: PhysicalSpline, point, segment_hint: int | None = None,
                tol=None, symbolic: bool = False):
    """Value of a physical spline at a curve point.

    ``segment_hint`` is the knot-interval index of the segment holding the
    point; without it the point is located with :func:`invert_point` (the
    first candidate wins at a self-intersection).  ``symbolic=True``
    evaluates the composed rational function instead of the branch
    polynomial at the recovered parameter; both give the same value.
    """
    pos, u = _locate(s.inverse, point, segment_hint, tol)
    if symbolic:
        rat = s.rational(pos)
        if rat is None:
            return zero(s.inverse.backend)
        num, den = rat
        return num.eval(*point) / den.eval(*point)
    return s.branch_value(pos, u)


@dataclass
class InverseSplineForm:
    """``phi^{-1} = sum_i xi_i N_i`` with Greville coefficients ``xi_i``."""

    p: int
    greville: list
    splines: list
    inverse: PiecewiseInverse
    self_intersecting: bool = False

    def __call__(self, point, segment_hint=None, tol=None):
        return self.eval(point, segment_hint, tol)

    def eval(self, point, segment_hint=None, tol=None):
        pos, u = _locate(self.inverse, point, segment_hint, tol)
        acc = zero(self.inverse.backend)
        for xi, s in zip(self.greville, self.splines):
            if pos in s.branches:
                acc += (float(xi) if self.inverse.backend is Backend.FLOAT else xi) \
                    * s.branch_value(pos, u)
        return acc

    @cached_property
    def branch_polys(self) -> dict:
        """``sum_i xi_i * branch_i`` per segment; the identity polynomial ``s``
        whenever linear precision holds."""
        out = {}
        for xi, s in zip(self.greville, self.splines):
            for pos, poly in s.branches.items():
                out[pos] = out.get(pos, UnivariatePoly()) + poly * xi
        return out

    def rational(self, pos: int):
        """Explicit rational function of ``(x, y)`` on segment ``pos``."""
        N, D = self.inverse.segments[pos].global_rational()
        return _compose(self.branch_polys[pos], N, D, self.p)


def inverse_spline_form(c: NurbsCurve, p: int, inv: PiecewiseInverse | None = None,
                        multiplicities=None, self_intersecting: bool = False) -> InverseSplineForm:
    """Spline representation of the inverse with degree-``p`` physical splines.

    The Greville points are computed on the parametric knot vector whose
    multiplicities match the physical one, so the coefficient count equals
    the number of splines.
    """
    m = len(c.knots) - 1
    if not 1 <= p <= m - 1:
        raise ValueError(f"degree p must lie in 1..{m - 1}")
    inv = inv or global_inverse(c)
    pkv = physical_knots(c, multiplicities, p)
    splines = physical_splines(c, inv, pkv, p)
    xi = greville(pkv.parametric(), p)
    return InverseSplineForm(p, xi, splines, inv, self_intersecting)


@dataclass(frozen=True)
class ContinuityReport:
    knot_index: int
    u: object
    multiplicity: int
    h: tuple
    jumps: dict       # order -> jump estimates, one per h
    continuous: dict  # order -> bool
    order: int        # highest r with orders 0..r continuous; -1 for a value jump


def continuity_probe(s: PhysicalSpline, knot_index: int, h_list=None) -> ContinuityReport:
    """Finite-difference estimate of the smoothness of ``s o phi`` at a knot.

    ``knot_index`` indexes the distinct physical knots.  One-sided differences
    of order ``r`` on each side (each side evaluated through its own segment's
    local inverse) estimate the derivative jump; order ``r`` counts as
    continuous when the jump shrinks at least linearly with ``h``.  Orders
    ``0 .. p - mu + 1`` are probed.
    """
    pkv = s.knots
    distinct = pkv.distinct_preimages
    if not 0 < knot_index < len(distinct) - 1:
        raise ValueError("continuity_probe needs an interior knot")
    inv = s.inverse
    be = inv.backend
    u0 = distinct[knot_index]
    mu = pkv.multiplicities[knot_index]
    if h_list is None:
        h_list = [Fraction(1, 10 ** e) for e in (3, 4, 5)]
    h_list = [Fraction(h) if be is Backend.EXACT else float(h) for h in h_list]
    left = inv.segment_index(u0) - 1
    right = inv.segment_index(u0)
    if be is Backend.FLOAT:
        u0 = float(u0)

    def value(pos, u):
        seg = inv.segments[pos]
        bz = seg.bezier
        t = bz.to_local(u)
        x, y = bz.point(t)
        uu = inv.eval_on_segment(pos, x, y)
        return s.branch_value(pos, uu)

    max_order = max(0, min(s.p, s.p - mu + 1))
    jumps, cont = {}, {}
    for r in range(max_order + 1):
        js = []
        for h in h_list:
            fwd = sum((-1) ** (r - i) * comb(r, i) * value(right, u0 + i * h) for i in range(r + 1))
            bwd = sum((-1) ** i * comb(r, i) * value(left, u0 - i * h) for i in range(r + 1))
            js.append(abs(float(fwd / h ** r - bwd / h ** r)))
        jumps[r] = tuple(js)
        ratio = float(h_list[-1] / h_list[0])
        cont[r] = js[-1] <= 1e-12 or js[-1] <= 10 * ratio * js[0]
    order = -1
    for r in range(max_order + 1):
        if not cont[r]:
            break
        order = r
    return ContinuityReport(knot_index, u0, mu, tuple(h_list), jumps, cont, order)
