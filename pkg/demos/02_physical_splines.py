# %% [markdown]
# # Physical rational splines
#
# Running the Cox-de Boor recursion on knot images on the curve, with the
# rational inverse in place of the parameter, gives splines that live on
# the curve itself.  On every segment they are rational in (x, y), and
# pulled back through phi they are exactly the parametric B-splines.

# %%
from fractions import Fraction

from nurbs_inverse import (bspline_basis, curve_eval, global_inverse, inverse_spline_form,
                           load_fixture, physical_knots, physical_splines, spline_eval)

c = load_fixture("quadratic")
pi = global_inverse(c)
pkv = physical_knots(c, p=1)
print("physical knots:", [(str(x), str(y)) for x, y in pkv.points])

# %% [markdown]
# Degree-1 splines on {U_0, U_0, U_1, U_2, U_2}.  Each branch is a
# polynomial in s = phi^{-1}(x, y); composed with the segment inverse it
# becomes an explicit rational function.

# %%
splines = physical_splines(c, pi, pkv, 1)
for s in splines:
    print(f"N_{s.k},1 is supported on segments {s.support}")
    for pos in sorted(s.branches):
        num, den = s.rational(pos)
        x, y = pi.segments[pos].bezier.point(Fraction(1, 3))
        print(f"   segment {pi.segments[pos].k}: value at phi(t=1/3) = "
              f"{num.eval(x, y) / den.eval(x, y)}")

# %% [markdown]
# Pullback, partition of unity and nonnegativity at a few points, all exact.

# %%
U = pkv.parametric()
for u in (Fraction(1, 10), Fraction(1, 2), Fraction(7, 10)):
    pt = curve_eval(c, u)
    vals = [spline_eval(s, pt) for s in splines]
    ref = [bspline_basis(U, 1, s.k, u) for s in splines]
    print(f"u={u}: values {[str(v) for v in vals]}, sum {sum(vals)}, pullback ok: {vals == ref}")

# %% [markdown]
# Linear precision turns the splines into another form of the inverse:
# phi^{-1} = sum_i xi_i N_i with Greville coefficients xi_i.  Degrees 1
# and 2 give the same values.

# %%
f1, f2 = inverse_spline_form(c, 1, pi), inverse_spline_form(c, 2, pi)
print("Greville p=1:", [str(v) for v in f1.greville])
print("Greville p=2:", [str(v) for v in f2.greville])
for u in (Fraction(1, 5), Fraction(3, 5), Fraction(19, 20)):
    pt = curve_eval(c, u)
    print(f"u={u}: p=1 -> {f1(pt)}, p=2 -> {f2(pt)}")
