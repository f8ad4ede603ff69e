"""Independent reference implementations used only by the tests.

Nothing here imports the algorithms under test: determinants by the
Leibniz permutation sum, curve points by de Boor's algorithm on the
homogeneous control points, and the quadratic basis written out by hand.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows):
    """Determinant of a square matrix whose entries support + and *."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = perm_sign(perm)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def de_boor_point(degree, knots, points, weights, u):
    """Rational curve point by de Boor's algorithm in homogeneous coordinates."""
    knots = list(knots)
    n = len(points) - 1
    if u == knots[-1]:
        k = max(i for i in range(len(knots) - 1) if knots[i] < knots[i + 1])
    else:
        k = max(i for i in range(len(knots) - 1) if knots[i] <= u < knots[i + 1])
    d = [(w, w * x, w * y) for (x, y), w in zip(points, weights)]
    d = [d[j + k - degree] for j in range(degree + 1)]
    for r in range(1, degree + 1):
        for j in range(degree, r - 1, -1):
            i = j + k - degree
            den = knots[i + degree - r + 1] - knots[i]
            a = (u - knots[i]) / den if den else 0
            d[j] = tuple((1 - a) * p + a * q for p, q in zip(d[j - 1], d[j]))
    assert 0 <= k - degree and k <= n
    w, wx, wy = d[degree]
    return wx / w, wy / w


def quadratic_basis(i, u):
    """Hand-derived quadratic B-splines on ``{0, 0, 0, 1/2, 1, 1, 1}``."""
    u = Fraction(u)
    left = u < Fraction(1, 2)
    if i == 0:
        return (1 - 2 * u) ** 2 if left else Fraction(0)
    if i == 1:
        return 4 * u - 6 * u ** 2 if left else 2 * (1 - u) ** 2
    if i == 2:
        return 2 * u ** 2 if left else -2 + 8 * u - 6 * u ** 2
    if i == 3:
        return Fraction(0) if left else (2 * u - 1) ** 2
    raise IndexError(i)


# Branch formulas printed for the quadratic example curve.
def published_inverse(seg, x, y):
    if seg == 0:
        return (-31 * x + 3 * y) / (28 * x + 31 * y - 57)
    return (255 * x + 85 * y - 136) / (180 * x + 55 * y - 49)


def published_linear_splines(k, seg, x, y):
    d0 = 28 * x + 31 * y - 57
    d1 = 180 * x + 55 * y - 49
    table = {
        (0, 0): (90 * x + 25 * y - 57) / d0,
        (1, 0): (-62 * x + 6 * y) / d0,
        (1, 1): (-150 * x - 60 * y + 174) / d1,
        (2, 1): (330 * x + 115 * y - 223) / d1,
    }
    return table.get((k, seg), Fraction(0))
