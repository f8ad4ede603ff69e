# %% [markdown]
# # Inverting a quadratic NURBS curve exactly
#
# A planar NURBS curve phi: [0, 1] -> R^2 is usually inverted numerically,
# by projecting a point onto the curve with Newton iterations.  For a curve
# in general position each Bezier segment is birational, so its inverse is
# a rational function of (x, y).  Here we build that function for a small
# quadratic curve with two segments and check it with exact fractions.

# %%
from fractions import Fraction

from nurbs_inverse import (curve_eval, genericity_check, global_inverse, invert_point,
                           load_fixture, quadratic_closed_form)

c = load_fixture("quadratic")
print("knots:  ", [str(u) for u in c.knots])
print("points: ", [(str(x), str(y)) for x, y in c.control_points])
print("weights:", [str(w) for w in c.weights])

# %% [markdown]
# No three consecutive control points are collinear, so both segments are
# general and the construction applies.

# %%
for rep in genericity_check(c):
    print(f"segment {rep.k}: general={rep.general} ({rep.details})")

# %% [markdown]
# Each segment's inverse comes from two consecutive signed minors of the
# Sylvester matrix of X(t) = f1(t) - x f0(t) and Y(t) = f2(t) - y f0(t).
# Rescaled to the global parameter, the minors carry common factors; the
# reduced branches are
#
#     C_0: (-31x + 3y) / (28x + 31y - 57)
#     C_1: (255x + 85y - 136) / (180x + 55y - 49)
#
# We check them against the constructed minors by value on the curve.

# %%
pi = global_inverse(c)
reduced = [lambda x, y: (-31 * x + 3 * y) / (28 * x + 31 * y - 57),
           lambda x, y: (255 * x + 85 * y - 136) / (180 * x + 55 * y - 49)]
for pos, seg in enumerate(pi.segments):
    N, D = seg.global_rational()
    print(f"segment {seg.k} on [{seg.u_lo}, {seg.u_hi}): numerator has "
          f"{len(N.terms)} terms, total degree {N.total_degree}")
    for u in (seg.u_lo + (seg.u_hi - seg.u_lo) * Fraction(j, 4) for j in (1, 2, 3)):
        x, y = curve_eval(c, u)
        print(f"   u={u}: minors give {N.eval(x, y) / D.eval(x, y)}, "
              f"reduced branch gives {reduced[pos](x, y)}")

# %% [markdown]
# The knot image U_1 = phi(1/2) = (7/15, 3/5) sits on both segments.  The
# half-open convention assigns it to the right segment.

# %%
res = invert_point(pi, (Fraction(7, 15), Fraction(3, 5)))
print("preimage of (7/15, 3/5):", res.u, "on segment", res.candidates[0].segment)

# %% [markdown]
# For quadratics there is also a closed form built from 3x3 determinants.
# It returns the local chart parameter t in [0, 1] and agrees with the
# minors path.

# %%
cf = quadratic_closed_form(c, 2)
x, y = curve_eval(c, Fraction(1, 8))
print("closed form t at phi(1/8):", cf.eval(x, y), "(expected 1/4 = 2 * 1/8)")
