# %% [markdown]
# # Self-intersections and the cost of Newton iteration
#
# The quintic example crosses itself.  The inverse is then multivalued at
# the crossing, and the closed form returns both preimages.  Away from the
# crossing, evaluating the rational inverse is much cheaper than iterating.

# %%
from nurbs_inverse import (Backend, OracleConfig, bench_compare, global_inverse, invert_point,
                           load_fixture, newton_invert, self_intersections)

c = load_fixture("quintic", Backend.FLOAT)
pi = global_inverse(c)
(s,) = self_intersections(c)
print(f"crossing S = ({s.point[0]:.12f}, {s.point[1]:.12f}) at u = {s.u1:.10f}, {s.u2:.10f}")

# %%
res = invert_point(pi, s.point, 1e-8)
oracle = newton_invert(c, s.point, OracleConfig(tolerance=1e-8))
for cd in res.candidates:
    print(f"closed form: u = {cd.u:.12f} (segment {cd.segment}, residual {cd.residual:.1e})")
for cd in oracle.candidates:
    print(f"newton:      u = {cd.u:.12f} (segment {cd.segment}, residual {cd.residual:.1e})")
print("multivalued:", res.multivalued)

# %% [markdown]
# Benchmark on the cubic example.  Timings depend on the machine; the
# agreement between the two methods does not.

# %%
report = bench_compare(load_fixture("cubic"), 2000)
print(report.to_text())
