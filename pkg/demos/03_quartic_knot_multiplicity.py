# %% [markdown]
# # A C0 point and discontinuous physical splines
#
# The quartic example has the inner knot 2/3 with multiplicity 4 = d, so
# the curve passes through the control point P_5 there with only C0
# continuity.  Degree-3 physical splines with that multiplicity carry a
# jump at U_2 = phi(2/3).  The inverse still works on every segment.

# %%
from fractions import Fraction

from nurbs_inverse import (continuity_probe, curve_eval, global_inverse, invert_point,
                           load_fixture, physical_knots, physical_splines)

c = load_fixture("quartic")
pi = global_inverse(c)
print("phi(2/3) =", curve_eval(c, Fraction(2, 3)), " P_5 =", c.control_points[5])

# %%
pkv = physical_knots(c, p=3)
print("multiplicities:", pkv.multiplicities)
splines = physical_splines(c, pi, pkv, 3)
for s in splines:
    rep = continuity_probe(s, 2)
    jumps = ", ".join(f"{j:.1e}" for j in rep.jumps[0])
    print(f"N_{s.k},3 at U_2: order {rep.order:>2}, value jumps for h=1e-3..1e-5: {jumps}")

# %% [markdown]
# An order of -1 means the value itself jumps and the jump does not shrink
# with h.  The round trip on the open segments is unaffected:

# %%
for seg in pi.segments:
    us = [seg.param(Fraction(j, 5)) for j in range(1, 5)]
    ok = all(invert_point(pi, curve_eval(c, u)).u == u for u in us)
    print(f"segment {seg.k} [{seg.u_lo}, {seg.u_hi}): round trip exact: {ok}")
