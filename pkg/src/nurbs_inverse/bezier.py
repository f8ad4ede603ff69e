"""Bezier extraction: per-interval Bernstein form of a NURBS curve.

On the active interval ``[u_lo, u_hi)`` the chart ``t = (u - u_lo)/(u_hi - u_lo)``
turns the curve into a rational Bezier segment whose homogeneous components
``(f0, f1, f2)`` are stored as monomial polynomials in ``t``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bspline import KnotVector, NurbsCurve, active_intervals
from .ratpoly import Backend, UnivariatePoly, binomial, one, zero


class InactiveInterval(IndexError):
    pass


def insert_knot(knots: list, d: int, ctrl: list, u) -> tuple[list, list]:
    """Boehm insertion of ``u`` once; ``ctrl`` is a list of coefficient tuples."""
    # span r with knots[r] <= u < knots[r+1]
    r = max(i for i in range(len(knots) - 1) if knots[i] <= u < knots[i + 1])
    out = []
    for i in range(len(ctrl) + 1):
        if i <= r - d:
            out.append(ctrl[i])
        elif i > r:
            out.append(ctrl[i - 1])
        else:
            alpha = (u - knots[i]) / (knots[i + d] - knots[i])
            out.append(tuple((1 - alpha) * a + alpha * b
                             for a, b in zip(ctrl[i - 1], ctrl[i])))
    return knots[:r + 1] + [u] + knots[r + 1:], out


def _active(U: KnotVector, k: int):
    for kk, lo, hi in active_intervals(U):
        if kk == k:
            return lo, hi
    raise InactiveInterval(f"knot interval {k} has zero length or does not exist")


def _extract(U: KnotVector, d: int, k: int, ctrl: list) -> list:
    """Bezier control coefficients of ``ctrl`` on active interval ``k``."""
    lo, hi = _active(U, k)
    knots = list(U.knots)
    for target in (lo, hi):
        if target == U.knots[-1]:
            continue
        while knots.count(target) < d:
            knots, ctrl = insert_knot(knots, d, ctrl, target)
    # index of [lo, hi) in the refined vector
    kk = max(i for i in range(len(knots) - 1) if knots[i] == lo and knots[i + 1] == hi)
    return ctrl[kk - d:kk + 1]


def extraction_matrix(U: KnotVector, d: int, k: int) -> list[list]:
    """Change-of-basis matrix ``S`` with ``(F_0..F_d) = (B_0..B_d) . S``.

    ``F_j`` is ``N_{k-d+j,d}`` restricted to interval ``k`` and ``B_i`` the
    Bernstein polynomials in the local chart.  Row ``i`` holds Bernstein
    coefficient ``i``; column ``j`` belongs to ``F_j``.  Computed by knot
    insertion on the unit coefficient vectors.
    """
    _active(U, k)
    n_funcs = len(U) - d - 1
    be = U.backend
    ident = [tuple(one(be) if i == j else zero(be) for j in range(n_funcs))
             for i in range(n_funcs)]
    rows = _extract(U, d, k, ident)
    return [[rows[i][k - d + j] for j in range(d + 1)] for i in range(d + 1)]


def quadratic_weighted_matrix(c: NurbsCurve, k: int, weighted: bool = True) -> list[list]:
    """Quadratic extraction matrix from the knot ratios ``a_k``, ``b_k``.

    Row ``i`` is scaled by ``w_{k-2+i}`` unless ``weighted`` is false, in
    which case this is exactly ``extraction_matrix`` for ``d = 2``.
    """
    if c.degree != 2:
        raise ValueError("quadratic_weighted_matrix needs a degree-2 curve")
    U = c.knots
    _active(U, k)
    u = U.knots
    be = c.backend

    def ratio(num, den):
        return num / den if den != 0 else zero(be)

    a = ratio(u[k] - u[k - 1], u[k + 1] - u[k - 1])
    b = ratio(u[k + 1] - u[k], u[k + 2] - u[k])
    if weighted:
        w0, w1, w2 = c.weights[k - 2], c.weights[k - 1], c.weights[k]
    else:
        w0 = w1 = w2 = one(be)
    z = zero(be)
    return [
        [w0 * (1 - a), w0 * a, z],
        [z, w1 * one(be), z],
        [z, w2 * (1 - b), w2 * b],
    ]


def bernstein_to_monomial(coeffs: list, backend: Backend) -> UnivariatePoly:
    """Monomial form of ``sum_i coeffs[i] * C(d,i) t^i (1-t)^(d-i)``."""
    d = len(coeffs) - 1
    out = [zero(backend)] * (d + 1)
    for i, ci in enumerate(coeffs):
        if ci == 0:
            continue
        for j in range(i, d + 1):
            sign = -1 if (j - i) % 2 else 1
            out[j] += ci * binomial(d, i) * binomial(d - i, j - i) * sign
    return UnivariatePoly._raw(out, backend)


@dataclass(frozen=True)
class BezierSegment:
    k: int
    u_lo: object
    u_hi: object
    f0: UnivariatePoly
    f1: UnivariatePoly
    f2: UnivariatePoly
    d: int
    bernstein: tuple  # homogeneous Bezier control points (w, w x, w y)

    @property
    def backend(self) -> Backend:
        return self.f0.backend

    def point(self, t):
        w = self.f0.eval(t)
        return self.f1.eval(t) / w, self.f2.eval(t) / w

    def to_param(self, t):
        return self.u_lo + t * (self.u_hi - self.u_lo)

    def to_local(self, u):
        return (u - self.u_lo) / (self.u_hi - self.u_lo)

    def to_backend(self, backend: Backend) -> "BezierSegment":
        if backend is self.backend:
            return self
        conv = float if backend is Backend.FLOAT else (lambda v: v)
        return BezierSegment(
            self.k, conv(self.u_lo), conv(self.u_hi),
            self.f0.to_backend(backend), self.f1.to_backend(backend),
            self.f2.to_backend(backend), self.d,
            tuple(tuple(conv(v) for v in q) for q in self.bernstein))


def segment_homogeneous(c: NurbsCurve, k: int) -> BezierSegment:
    """Bezier segment of ``c`` on the active interval ``k``.

    Multiplies the Bernstein row by ``S`` and by the weighted lifted points
    ``w_i (1, x_i, y_i)``, ``i = k-d..k``.
    """
    lo, hi = _active(c.knots, k)
    d = c.degree
    be = c.backend
    S = extraction_matrix(c.knots, d, k)
    pts = [c.lifted_weighted(k - d + j) for j in range(d + 1)]
    bern = []
    for i in range(d + 1):
        row = [zero(be)] * 3
        for j in range(d + 1):
            s = S[i][j]
            if s == 0:
                continue
            for comp in range(3):
                row[comp] += s * pts[j][comp]
        bern.append(tuple(row))
    f0, f1, f2 = (bernstein_to_monomial([q[comp] for q in bern], be) for comp in range(3))
    return BezierSegment(k, lo, hi, f0, f1, f2, d, tuple(bern))


def bezier_segments(c: NurbsCurve) -> list[BezierSegment]:
    return [segment_homogeneous(c, k) for k, _, _ in c.active_intervals()]
