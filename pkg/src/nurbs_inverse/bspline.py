"""Knot vectors, Cox-de Boor basis evaluation and planar NURBS curves."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ratpoly import Backend, BackendMismatch, _check_arg, one, to_scalar, zero


class CurveError(ValueError):
    """Invalid curve data; the message names the offending field and index."""


class DomainError(ValueError):
    """Parameter outside ``[u_0, u_m]``."""


def _ratio(num, den):
    # 0/0 (and anything over a zero-length span) is taken as 0
    if den == 0:
        return den
    return num / den


@dataclass(frozen=True)
class KnotVector:
    knots: tuple
    backend: Backend = Backend.EXACT

    def __post_init__(self):
        ks = tuple(to_scalar(k, self.backend) for k in self.knots)
        object.__setattr__(self, "knots", ks)
        if len(ks) < 2:
            raise CurveError("knots: need at least two knots")
        for i in range(1, len(ks)):
            if ks[i] < ks[i - 1]:
                raise CurveError(f"knots[{i}]: knot vector must be nondecreasing")
        if not ks[-1] > ks[0]:
            raise CurveError("knots: last knot must exceed the first")

    def __len__(self):
        return len(self.knots)

    def __getitem__(self, i):
        return self.knots[i]

    def __iter__(self):
        return iter(self.knots)

    @property
    def m(self) -> int:
        """Index of the last knot (``len - 1``)."""
        return len(self.knots) - 1

    @property
    def domain(self):
        return self.knots[0], self.knots[-1]

    def is_clamped(self, d: int) -> bool:
        ks = self.knots
        if len(ks) < 2 * (d + 1):
            return False
        return all(ks[i] == ks[0] for i in range(d + 1)) and all(
            ks[-1 - i] == ks[-1] for i in range(d + 1))

    def to_backend(self, backend: Backend) -> "KnotVector":
        if backend is self.backend:
            return self
        conv = float if backend is Backend.FLOAT else Fraction
        return KnotVector(tuple(conv(k) for k in self.knots), backend)

    @classmethod
    def from_reduced(cls, distinct, mults, backend=Backend.EXACT) -> "KnotVector":
        ks = []
        for k, mu in zip(distinct, mults):
            ks.extend([k] * mu)
        return cls(tuple(ks), backend)


def reduced_knots(U: KnotVector):
    """Distinct knots and their multiplicities, e.g. ``{0,0,0,1/2,1,1,1}`` ->
    ``([0, 1/2, 1], [3, 1, 3])``."""
    distinct, mults = [], []
    for k in U:
        if distinct and distinct[-1] == k:
            mults[-1] += 1
        else:
            distinct.append(k)
            mults.append(1)
    return distinct, mults


def active_intervals(U: KnotVector):
    """``(k, u_k, u_{k+1})`` for every knot interval of positive length."""
    ks = U.knots
    return [(k, ks[k], ks[k + 1]) for k in range(len(ks) - 1) if ks[k + 1] > ks[k]]


def find_span(U: KnotVector, u) -> int:
    """Index ``k`` of the half-open interval ``[u_k, u_{k+1})`` holding ``u``.

    The last non-degenerate interval also owns the right end of the domain.
    """
    lo, hi = U.domain
    if u < lo or u > hi:
        raise DomainError(f"parameter {u} outside [{lo}, {hi}]")
    spans = active_intervals(U)
    if u == hi:
        return spans[-1][0]
    for k, a, b in spans:
        if a <= u < b:
            return k
    raise DomainError(f"parameter {u} not in any knot interval")  # pragma: no cover


def bspline_basis(U: KnotVector, d: int, k: int, u) -> object:
    """``N_{k,d}(u)`` by the Cox-de Boor recursion.

    Uses the ``0/0 = 0`` convention at repeated knots.  At the right end of
    the domain the degree-0 function of the last non-degenerate interval is 1,
    so the last basis function of a clamped vector evaluates to 1 there.
    """
    n_funcs = len(U) - d - 1
    if d < 0 or not 0 <= k < n_funcs:
        raise IndexError(f"basis index {k} out of range for degree {d} and {len(U)} knots")
    u = _check_arg(u, U.backend)
    lo, hi = U.domain
    if u < lo or u > hi:
        raise DomainError(f"parameter {u} outside [{lo}, {hi}]")
    span = find_span(U, u)
    return _basis_rec(U.knots, d, k, u, span, U.backend)


def _basis_rec(ks, d, k, u, span, backend):
    if d == 0:
        return one(backend) if k == span else zero(backend)
    left = _ratio(u - ks[k], ks[k + d] - ks[k])
    right = _ratio(ks[k + d + 1] - u, ks[k + d + 1] - ks[k + 1])
    val = zero(backend)
    if left != 0:
        val += left * _basis_rec(ks, d - 1, k, u, span, backend)
    if right != 0:
        val += right * _basis_rec(ks, d - 1, k + 1, u, span, backend)
    return val


def basis_functions(U: KnotVector, d: int, u):
    """All ``d+1`` basis functions that can be nonzero at ``u``.

    Returns ``(span, values)`` where ``values[j] = N_{span-d+j,d}(u)``; the
    triangular table is the same recursion organised bottom-up.
    """
    u = _check_arg(u, U.backend)
    span = find_span(U, u)
    ks = U.knots
    N = [one(U.backend)]
    left = [zero(U.backend)] * (d + 1)
    right = [zero(U.backend)] * (d + 1)
    for j in range(1, d + 1):
        left[j] = u - ks[span + 1 - j]
        right[j] = ks[span + j] - u
        saved = zero(U.backend)
        nxt = []
        for r in range(j):
            den = right[r + 1] + left[j - r]
            tmp = N[r] / den if den != 0 else zero(U.backend)
            nxt.append(saved + right[r + 1] * tmp)
            saved = left[j - r] * tmp
        nxt.append(saved)
        N = nxt
    return span, N


def greville(U: KnotVector, p: int):
    """Greville abscissae ``xi_i = (u_{i+1} + ... + u_{i+p}) / p``."""
    if p < 1:
        raise ValueError("Greville points need p >= 1")
    count = len(U) - p - 1
    if count < 1:
        raise ValueError(f"degree {p} too large for {len(U)} knots")
    ks = U.knots
    return [sum(ks[i + 1:i + p + 1], zero(U.backend)) / p for i in range(count)]


@dataclass(frozen=True)
class NurbsCurve:
    """Planar NURBS curve ``u -> sum w_i P_i N_{i,d}(u) / sum w_i N_{i,d}(u)``.

    The knot vector must be clamped (end multiplicity ``d+1``) and the number
    of control points is ``len(knots) - d - 1``.
    """

    degree: int
    knots: KnotVector
    control_points: tuple
    weights: tuple
    name: str = ""
    backend: Backend = field(default=Backend.EXACT)

    def __post_init__(self):
        be = self.backend
        d = self.degree
        if not isinstance(d, int) or d < 1:
            raise CurveError(f"degree: must be an integer >= 1, got {d!r}")
        kv = self.knots
        if not isinstance(kv, KnotVector):
            kv = KnotVector(tuple(kv), be)
        elif kv.backend is not be:
            raise BackendMismatch("knot vector backend differs from curve backend")
        object.__setattr__(self, "knots", kv)
        pts = []
        for i, p in enumerate(self.control_points):
            if len(p) != 2:
                raise CurveError(f"control_points[{i}]: expected an (x, y) pair")
            try:
                pts.append((to_scalar(p[0], be), to_scalar(p[1], be)))
            except (ValueError, ZeroDivisionError) as exc:
                raise CurveError(f"control_points[{i}]: {exc}") from None
        object.__setattr__(self, "control_points", tuple(pts))
        ws = []
        for i, w in enumerate(self.weights):
            try:
                w = to_scalar(w, be)
            except (ValueError, ZeroDivisionError) as exc:
                raise CurveError(f"weights[{i}]: {exc}") from None
            if not w > 0:
                raise CurveError(f"weights[{i}]: weight must be positive, got {w}")
            ws.append(w)
        object.__setattr__(self, "weights", tuple(ws))
        n_ctrl = len(kv) - d - 1
        if len(pts) != n_ctrl:
            raise CurveError(
                f"control_points: expected {n_ctrl} points for {len(kv)} knots "
                f"and degree {d}, got {len(pts)}")
        if len(ws) != len(pts):
            raise CurveError(f"weights: expected {len(pts)} weights, got {len(ws)}")
        if not kv.is_clamped(d):
            raise CurveError(f"knots: end knots must have multiplicity {d + 1}")
        _, mults = reduced_knots(kv)
        for j, mu in enumerate(mults[1:-1], start=1):
            if mu > d + 1:
                raise CurveError(f"knots: inner knot #{j} has multiplicity {mu} > {d + 1}")

    @property
    def n(self) -> int:
        """Index of the last control point."""
        return len(self.control_points) - 1

    @property
    def domain(self):
        return self.knots.domain

    def active_intervals(self):
        return active_intervals(self.knots)

    def lifted_weighted(self, i: int):
        """``w_i * (1, x_i, y_i)``."""
        w = self.weights[i]
        x, y = self.control_points[i]
        return (w, w * x, w * y)

    def homogeneous(self, u):
        """``(f0, f1, f2)(u)``, the weighted sums before the perspective divide."""
        u = _check_arg(u, self.backend)
        span, vals = basis_functions(self.knots, self.degree, u)
        f0 = f1 = f2 = zero(self.backend)
        for j, nv in enumerate(vals):
            if nv == 0:
                continue
            a, b, c = self.lifted_weighted(span - self.degree + j)
            f0 += a * nv
            f1 += b * nv
            f2 += c * nv
        return f0, f1, f2

    def __call__(self, u):
        return curve_eval(self, u)

    def to_backend(self, backend: Backend) -> "NurbsCurve":
        if backend is self.backend:
            return self
        conv = float if backend is Backend.FLOAT else Fraction
        return NurbsCurve(
            self.degree,
            self.knots.to_backend(backend),
            tuple((conv(x), conv(y)) for x, y in self.control_points),
            tuple(conv(w) for w in self.weights),
            self.name,
            backend,
        )

    def exact(self) -> "NurbsCurve":
        return self.to_backend(Backend.EXACT)


def curve_eval(c: NurbsCurve, u):
    """Point ``phi(u)`` of the curve."""
    f0, f1, f2 = c.homogeneous(u)
    return f1 / f0, f2 / f0


def basis_values_all(U: KnotVector, d: int, u) -> list:
    """Every ``N_{k,d}(u)``, ``k = 0..len(U)-d-2``, via the triangular table."""
    count = len(U) - d - 1
    out = [zero(U.backend)] * count
    span, vals = basis_functions(U, d, u)
    for j, v in enumerate(vals):
        k = span - d + j
        if 0 <= k < count:
            out[k] = v
    return out
