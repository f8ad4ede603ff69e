"""Scalars and polynomials over two interchangeable backends.

``Backend.EXACT`` stores every coefficient as a :class:`fractions.Fraction`;
``Backend.FLOAT`` stores IEEE doubles.  Polynomials remember their backend and
refuse to combine with a polynomial (or scalar) of the other one.
"""
from __future__ import annotations

import enum
import math
import numbers
from fractions import Fraction
from functools import lru_cache

import numpy as np


class Backend(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class BackendMismatch(TypeError):
    """Raised when exact and floating-point values meet in one operation."""


def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"``, a terminating decimal string, or an int into a Fraction.

    Floats are converted through their shortest decimal repr, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        if not math.isfinite(text):
            raise ValueError(f"non-finite scalar {text!r}")
        return Fraction(repr(text))
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot parse {type(text).__name__} as a scalar")


def to_scalar(value, backend: Backend):
    """Coerce ``value`` into ``backend``.

    Ints are accepted by both backends.  A float handed to the exact backend
    is a mixing error; a Fraction handed to the float backend is converted.
    """
    if backend is Backend.EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return Fraction(int(value))
        if isinstance(value, str):
            return parse_scalar(value)
        raise BackendMismatch(f"{type(value).__name__} value {value!r} in exact backend")
    if isinstance(value, (float, int, Fraction, np.floating, np.integer)):
        return float(value)
    raise BackendMismatch(f"{type(value).__name__} value {value!r} in float backend")


def scalar_backend(value) -> Backend:
    if isinstance(value, (float, np.floating)):
        return Backend.FLOAT
    if isinstance(value, numbers.Rational):
        return Backend.EXACT
    raise TypeError(f"not a scalar: {value!r}")


def zero(backend: Backend):
    return Fraction(0) if backend is Backend.EXACT else 0.0


def one(backend: Backend):
    return Fraction(1) if backend is Backend.EXACT else 1.0


def _check_arg(value, backend: Backend):
    # ints are backend-neutral; anything else must match exactly
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value) if backend is Backend.EXACT else float(value)
    if backend is Backend.EXACT:
        if isinstance(value, Fraction):
            return value
        raise BackendMismatch(f"{value!r} is not exact")
    if isinstance(value, (float, np.floating)):
        return float(value)
    raise BackendMismatch(f"{value!r} is not a float")


@lru_cache(maxsize=None)
def binomial(n: int, k: int) -> int:
    return math.comb(n, k)


class UnivariatePoly:
    """Polynomial in ``t``; ``coeffs[i]`` multiplies ``t**i``.

    Trailing zeros are stripped, so the zero polynomial has no coefficients.
    """

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs=(), backend: Backend = Backend.EXACT):
        cs = [to_scalar(c, backend) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.backend = backend

    @classmethod
    def _raw(cls, coeffs, backend):
        obj = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        obj.coeffs = tuple(cs)
        obj.backend = backend
        return obj

    @classmethod
    def monomial(cls, degree: int, coeff=1, backend=Backend.EXACT):
        return cls([0] * degree + [coeff], backend)

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _coerce(self, other):
        if isinstance(other, UnivariatePoly):
            if other.backend is not self.backend:
                raise BackendMismatch("univariate polynomials from different backends")
            return other
        return UnivariatePoly._raw([_check_arg(other, self.backend)], self.backend)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UnivariatePoly._raw(out, self.backend)

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePoly._raw([-c for c in self.coeffs], self.backend)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UnivariatePoly._raw([], self.backend)
        out = [zero(self.backend)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly._raw(out, self.backend)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UnivariatePoly._raw([one(self.backend)], self.backend)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self.backend is other.backend and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.backend))

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        t = _check_arg(t, self.backend)
        acc = zero(self.backend)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self):
        return UnivariatePoly._raw([i * c for i, c in enumerate(self.coeffs)][1:], self.backend)

    def coefficient(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else zero(self.backend)

    def to_backend(self, backend: Backend):
        if backend is self.backend:
            return self
        if backend is Backend.FLOAT:
            return UnivariatePoly._raw([float(c) for c in self.coeffs], backend)
        return UnivariatePoly._raw([Fraction(c) for c in self.coeffs], backend)

    def __repr__(self):
        if not self.coeffs:
            return "UnivariatePoly(0)"
        parts = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "UnivariatePoly(" + " + ".join(parts) + ")"


class BivariatePoly:
    """Sparse polynomial in ``(x, y)`` keyed by exponent pairs."""

    __slots__ = ("terms", "backend", "_compiled")

    def __init__(self, terms=None, backend: Backend = Backend.EXACT):
        self.backend = backend
        self.terms = {}
        self._compiled = None
        for e, c in (terms or {}).items():
            c = to_scalar(c, backend)
            if c != 0:
                self.terms[(int(e[0]), int(e[1]))] = c

    @classmethod
    def _raw(cls, terms, backend):
        obj = cls.__new__(cls)
        obj.terms = {e: c for e, c in terms.items() if c != 0}
        obj.backend = backend
        obj._compiled = None
        return obj

    @classmethod
    def const(cls, c, backend=Backend.EXACT):
        return cls({(0, 0): c}, backend)

    @classmethod
    def x(cls, backend=Backend.EXACT):
        return cls({(1, 0): 1}, backend)

    @classmethod
    def y(cls, backend=Backend.EXACT):
        return cls({(0, 1): 1}, backend)

    @classmethod
    def linear(cls, c0, cx, cy, backend=Backend.EXACT):
        """``c0 + cx*x + cy*y``."""
        return cls({(0, 0): c0, (1, 0): cx, (0, 1): cy}, backend)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def _coerce(self, other):
        if isinstance(other, BivariatePoly):
            if other.backend is not self.backend:
                raise BackendMismatch("bivariate polynomials from different backends")
            return other
        return BivariatePoly._raw({(0, 0): _check_arg(other, self.backend)}, self.backend)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return BivariatePoly._raw(out, self.backend)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly._raw({e: -c for e, c in self.terms.items()}, self.backend)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for (a, b), c in self.terms.items():
            for (p, q), d in other.terms.items():
                key = (a + p, b + q)
                out[key] = out.get(key, 0) + c * d
        return BivariatePoly._raw(out, self.backend)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = BivariatePoly._raw({(0, 0): one(self.backend)}, self.backend)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.backend is other.backend and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.backend))

    def leading(self):
        """Lex-leading exponent pair (x before y) and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, divisor: "BivariatePoly") -> "BivariatePoly":
        """Quotient of an exact division; raises ValueError on a remainder."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        (da, db), dc = divisor.leading()
        rem = dict(self.terms)
        quot = {}
        while rem:
            (ra, rb) = max(rem)
            rc = rem[(ra, rb)]
            if ra < da or rb < db:
                raise ValueError("division leaves a remainder")
            qa, qb = ra - da, rb - db
            qc = rc / dc
            quot[(qa, qb)] = qc
            for (p, q), c in divisor.terms.items():
                key = (p + qa, q + qb)
                v = rem.get(key, 0) - qc * c
                if v == 0 or key == (ra, rb):
                    rem.pop(key, None)
                else:
                    rem[key] = v
        return BivariatePoly._raw(quot, self.backend)

    def __call__(self, x, y):
        return self.eval(x, y)

    def _compile(self):
        if self._compiled is None:
            items = sorted(self.terms.items())
            mx = max((a for (a, _), _ in items), default=0)
            my = max((b for (_, b), _ in items), default=0)
            self._compiled = (items, mx, my)
        return self._compiled

    def eval(self, x, y):
        x = _check_arg(x, self.backend)
        y = _check_arg(y, self.backend)
        items, mx, my = self._compile()
        xp = [one(self.backend)]
        for _ in range(mx):
            xp.append(xp[-1] * x)
        yp = [one(self.backend)]
        for _ in range(my):
            yp.append(yp[-1] * y)
        acc = zero(self.backend)
        for (a, b), c in items:
            acc += c * xp[a] * yp[b]
        return acc

    def eval_array(self, xs, ys):
        """Vectorised float evaluation over numpy arrays."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if not self.terms:
            return np.zeros(np.broadcast(xs, ys).shape)
        exps = np.array(list(self.terms), dtype=int)
        coeffs = np.array([float(c) for c in self.terms.values()])
        xp = xs[..., None] ** exps[:, 0]
        yp = ys[..., None] ** exps[:, 1]
        return (xp * yp) @ coeffs

    def to_backend(self, backend: Backend):
        if backend is self.backend:
            return self
        conv = float if backend is Backend.FLOAT else Fraction
        return BivariatePoly._raw({e: conv(c) for e, c in self.terms.items()}, backend)

    def scaled(self, factor):
        factor = _check_arg(factor, self.backend)
        return BivariatePoly._raw({e: c * factor for e, c in self.terms.items()}, self.backend)

    def translated(self, cx, cy) -> "BivariatePoly":
        """``q`` with ``q(X, Y) = p(X + cx, Y + cy)``."""
        cx = _check_arg(cx, self.backend)
        cy = _check_arg(cy, self.backend)
        out = {}
        for (a, b), c in self.terms.items():
            for i in range(a + 1):
                ci = c * binomial(a, i) * cx ** (a - i)
                for j in range(b + 1):
                    key = (i, j)
                    out[key] = out.get(key, zero(self.backend)) + ci * binomial(b, j) * cy ** (b - j)
        return BivariatePoly(out, self.backend)

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0)

    def __repr__(self):
        if not self.terms:
            return "BivariatePoly(0)"
        parts = [f"{c}*x^{a}*y^{b}" for (a, b), c in sorted(self.terms.items(), reverse=True)]
        return "BivariatePoly(" + " + ".join(parts) + ")"


class PolyMatrix:
    """Square matrix of bivariate polynomials."""

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n == 0:
            raise ValueError("matrix must be at least 1x1")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square with equal-length rows")
        backends = {e.backend for r in rows for e in r}
        if len(backends) != 1:
            raise BackendMismatch("matrix entries from different backends")
        self.rows = rows
        self.backend = backends.pop()

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def minor(self, row: int, col: int) -> "PolyMatrix | None":
        """Submatrix without ``row`` and ``col`` (0-based); None when 1x1."""
        if self.size == 1:
            return None
        return PolyMatrix([[e for j, e in enumerate(r) if j != col]
                           for i, r in enumerate(self.rows) if i != row])

    def evaluate(self, x, y) -> np.ndarray:
        """Scalar matrix at ``(x, y)``; object dtype in the exact backend."""
        vals = [[e.eval(x, y) for e in r] for r in self.rows]
        if self.backend is Backend.EXACT:
            out = np.empty((self.size, self.size), dtype=object)
            out[:] = vals
            return out
        return np.array(vals, dtype=float)


def det_bareiss(m: PolyMatrix) -> BivariatePoly:
    """Fraction-free one-step Bareiss elimination with row pivoting.

    Every division is an exact polynomial division, so exact coefficients
    stay in the polynomial ring.  Float matrices should use
    :func:`det_expansion` instead.
    """
    a = [list(r) for r in m.rows]
    n = len(a)
    backend = m.backend
    sign = 1
    prev = BivariatePoly.const(1, backend)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return BivariatePoly({}, backend)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev) if k else num
            a[i][k] = BivariatePoly({}, backend)
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def det_expansion(m: PolyMatrix) -> BivariatePoly:
    """Laplace expansion along rows, memoised on the set of used columns."""
    n = m.size
    backend = m.backend
    rows = m.rows
    memo = {}

    def sub(row, cols):
        # determinant of rows[row:] restricted to the sorted column tuple ``cols``
        if row == n:
            return BivariatePoly.const(1, backend)
        if cols in memo:
            return memo[cols]
        acc = BivariatePoly({}, backend)
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if entry.is_zero():
                continue
            rest = sub(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * rest
            acc = acc - term if pos % 2 else acc + term
        memo[cols] = acc
        return acc

    return sub(0, tuple(range(n)))


def det_poly(m: PolyMatrix, method: str = "auto") -> BivariatePoly:
    """Symbolic determinant of a polynomial matrix.

    ``method`` is ``"bareiss"``, ``"expansion"`` or ``"auto"`` (Bareiss for
    exact matrices, expansion for float ones, which cannot divide exactly).
    """
    if m is None:
        return BivariatePoly.const(1)
    if method == "auto":
        method = "bareiss" if m.backend is Backend.EXACT else "expansion"
    if method == "bareiss":
        if m.backend is not Backend.EXACT:
            raise BackendMismatch("Bareiss elimination needs exact coefficients")
        return det_bareiss(m)
    if method == "expansion":
        return det_expansion(m)
    raise ValueError(f"unknown determinant method {method!r}")


def upoly_arith(a: UnivariatePoly, b: UnivariatePoly, op: str) -> UnivariatePoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def fmt_scalar(value) -> str:
    """Render a scalar: ``p/q`` for fractions, ``repr`` for floats."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))
