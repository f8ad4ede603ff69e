import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import curve
from nurbs_inverse.bspline import (CurveError, DomainError, KnotVector, NurbsCurve,
                                   active_intervals, basis_functions, basis_values_all,
                                   bspline_basis, curve_eval, find_span, greville, reduced_knots)
from nurbs_inverse.ratpoly import Backend
from oracles import de_boor_point, quadratic_basis

Q = KnotVector((0, 0, 0, F(1, 2), 1, 1, 1))
QUARTIC_KNOTS = KnotVector((0, 0, 0, 0, 0, F(1, 3), F(2, 3), F(2, 3), F(2, 3), F(2, 3),
                            1, 1, 1, 1, 1))


def test_knot_vector_validation():
    with pytest.raises(CurveError, match="knots\\[2\\]"):
        KnotVector((0, 1, F(1, 2), 1))
    with pytest.raises(CurveError):
        KnotVector((0, 0))
    assert Q.is_clamped(2) and not Q.is_clamped(3)
    assert Q.m == 6 and Q.domain == (0, 1)


def test_reduced_knots_examples():
    assert reduced_knots(Q) == ([0, F(1, 2), 1], [3, 1, 3])
    assert reduced_knots(QUARTIC_KNOTS) == ([0, F(1, 3), F(2, 3), 1], [5, 1, 4, 5])
    assert reduced_knots(KnotVector((0, 0, 1, 1))) == ([0, 1], [2, 2])
    distinct, mults = reduced_knots(QUARTIC_KNOTS)
    assert sum(mults) == len(QUARTIC_KNOTS)
    assert KnotVector.from_reduced(distinct, mults) == QUARTIC_KNOTS


def test_active_intervals_examples():
    assert active_intervals(Q) == [(2, 0, F(1, 2)), (3, F(1, 2), 1)]
    assert active_intervals(KnotVector((0, 0, 1, 1))) == [(1, 0, 1)]
    assert [(lo, hi) for _, lo, hi in active_intervals(QUARTIC_KNOTS)] == [
        (0, F(1, 3)), (F(1, 3), F(2, 3)), (F(2, 3), 1)]


def test_find_span_half_open():
    assert find_span(Q, F(1, 2)) == 3
    assert find_span(Q, F(1, 2) - F(1, 10 ** 9)) == 2
    assert find_span(Q, 1) == 3
    with pytest.raises(DomainError):
        find_span(Q, F(3, 2))


def test_degree_zero_is_indicator():
    U = KnotVector((0, F(1, 4), F(1, 2), 1))
    for k, (lo, hi) in enumerate([(0, F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 2), 1)]):
        assert bspline_basis(U, 0, k, lo) == 1
        assert bspline_basis(U, 0, k, (lo + hi) / 2) == 1
        if hi != 1:
            assert bspline_basis(U, 0, k, hi) == 0


def test_basis_examples():
    assert sum(bspline_basis(Q, 2, k, F(3, 10)) for k in range(4)) == 1
    assert [bspline_basis(Q, 2, k, 0) for k in range(4)] == [1, 0, 0, 0]
    assert [bspline_basis(Q, 2, k, 1) for k in range(4)] == [0, 0, 0, 1]


def test_basis_matches_hand_derived_quadratics():
    for j in range(41):
        u = F(j, 40)
        for k in range(4):
            assert bspline_basis(Q, 2, k, u) == quadratic_basis(k, u)


def test_basis_errors():
    with pytest.raises(IndexError):
        bspline_basis(Q, 2, 4, F(1, 2))
    with pytest.raises(DomainError):
        bspline_basis(Q, 2, 0, F(-1, 2))


@pytest.mark.parametrize("U,d", [(Q, 2), (QUARTIC_KNOTS, 4), (QUARTIC_KNOTS, 2),
                                 (KnotVector((0, 0, 0, 0, F(1, 4), F(1, 2), F(1, 2), 1, 1, 1, 1)),
                                  3)])
def test_partition_local_support_linear_precision(U, d):
    rng = random.Random(7)
    xi = greville(U, d)
    count = len(U) - d - 1
    for _ in range(200):
        u = F(rng.randint(0, 1000), 1000)
        vals = [bspline_basis(U, d, k, u) for k in range(count)]
        assert sum(vals) == 1
        assert all(v >= 0 for v in vals)
        for k, v in enumerate(vals):
            if not U[k] <= u <= U[k + d + 1]:
                assert v == 0
        assert sum(x * v for x, v in zip(xi, vals)) == u
        # triangular table gives the same values
        assert basis_values_all(U, d, u) == vals


def test_partition_of_unity_float():
    Uf = QUARTIC_KNOTS.to_backend(Backend.FLOAT)
    rng = random.Random(11)
    for _ in range(1000):
        u = rng.random()
        assert abs(sum(basis_values_all(Uf, 4, u)) - 1) < 1e-13


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(0, 1, max_denominator=20), min_size=1, max_size=4),
       st.integers(1, 3), st.fractions(0, 1, max_denominator=50))
def test_basis_properties_random_knots(inner, d, u):
    U = KnotVector(tuple([F(0)] * (d + 1) + sorted(inner) + [F(1)] * (d + 1)))
    count = len(U) - d - 1
    if any(mu > d + 1 for mu in reduced_knots(U)[1][1:-1]):
        return
    vals = [bspline_basis(U, d, k, u) for k in range(count)]
    assert sum(vals) == 1 and min(vals) >= 0
    span, local = basis_functions(U, d, u)
    assert local == vals[span - d:span + 1]


def test_greville_examples():
    assert greville(Q, 2) == [0, F(1, 4), F(3, 4), 1]
    assert greville(KnotVector((0, 0, F(1, 2), 1, 1)), 1) == [0, F(1, 2), 1]
    assert greville(KnotVector((0, 1, 2, 3)), 1) == [1, 2]
    with pytest.raises(ValueError):
        greville(KnotVector((0, 1)), 1)
    with pytest.raises(ValueError):
        greville(Q, 0)


def test_greville_sorted_inside_domain():
    xi = greville(QUARTIC_KNOTS, 3)
    assert xi == sorted(xi) and xi[0] >= 0 and xi[-1] <= 1


def test_curve_examples_quadratic():
    c = curve("quadratic")
    assert curve_eval(c, 0) == (0, 0)
    assert curve_eval(c, F(1, 2)) == (F(7, 15), F(3, 5))
    u = F(1, 4)
    den = 55 * u ** 2 - 40 * u - 5
    assert curve_eval(c, u) == ((9 * u ** 2 - 15 * u) / den, (93 * u ** 2 - 60 * u) / den)


@pytest.mark.parametrize("name", ["quadratic", "cubic", "quartic", "quintic"])
def test_curve_matches_de_boor_and_interpolates_ends(name):
    c = curve(name)
    assert curve_eval(c, 0) == c.control_points[0]
    assert curve_eval(c, 1) == c.control_points[-1]
    for j in range(31):
        u = F(j, 30)
        assert curve_eval(c, u) == de_boor_point(c.degree, c.knots, c.control_points,
                                                 c.weights, u)


def test_curve_domain_error():
    with pytest.raises(DomainError):
        curve_eval(curve("quadratic"), 2)


def test_curve_validation_names_field():
    ok = dict(degree=2, knots=(0, 0, 0, 1, 1, 1), control_points=((0, 0), (1, 1), (2, 0)),
              weights=(1, 1, 1))
    NurbsCurve(**ok)
    with pytest.raises(CurveError, match="weights\\[1\\]"):
        NurbsCurve(**{**ok, "weights": (1, -1, 1)})
    with pytest.raises(CurveError, match="control_points"):
        NurbsCurve(**{**ok, "control_points": ((0, 0), (1, 1))})
    with pytest.raises(CurveError, match="weights"):
        NurbsCurve(**{**ok, "weights": (1, 1)})
    with pytest.raises(CurveError, match="multiplicity"):
        NurbsCurve(**{**ok, "knots": (0, 0, 1, 1, 1, 1)})
    with pytest.raises(CurveError, match="inner knot"):
        NurbsCurve(1, (0, 0, F(1, 2), F(1, 2), F(1, 2), 1, 1),
                   ((0, 0), (1, 0), (1, 1), (2, 1), (3, 1)), (1,) * 5)


def test_count_relation():
    # one control point per basis function: len(knots) - degree - 1
    for name in ["quadratic", "cubic", "quartic", "quintic"]:
        c = curve(name)
        assert len(c.control_points) == len(c.knots) - c.degree - 1


def test_float_curve_close_to_exact():
    c, fc = curve("cubic"), curve("cubic", Backend.FLOAT)
    for j in range(21):
        u = F(j, 20)
        ex, ey = curve_eval(c, u)
        fx, fy = curve_eval(fc, float(u))
        assert abs(fx - float(ex)) < 1e-14 and abs(fy - float(ey)) < 1e-14
