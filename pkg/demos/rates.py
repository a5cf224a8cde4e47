"""Measured linear rates against the Friedrichs angle.

On a pair with prescribed principal angles the DRM error shrinks by exactly
c_F per step (from a start in U + V) and MAP by c_F^2.  The C-DRM rate is
only bounded by c_F; its measured value is printed for comparison.
"""

import numpy as np

from circumfeas import StopCriterion, canonical_pair, empirical_rate, friedrichs_cosine, solve
from circumfeas.geometry import subspace_sum

inst = canonical_pair(12, [0.35, 0.9, 1.3], dim_int=2, seed=0)
u, v = inst.sets
fa = friedrichs_cosine(u, v)
print(f"c_F = {fa.cosine:.6f}, c_F^2 = {fa.cosine**2:.6f}, dim(U∩V) = {fa.intersection_dim}")
print("principal cosines:", np.round(fa.principal_cosines, 4))

rng = np.random.default_rng(1)
x = subspace_sum(u, v).project(rng.standard_normal(12))
crit = StopCriterion("true", 1e-9)

for method, prestep in (("drm", "none"), ("map", "none"), ("cdrm", "v")):
    res = solve(method, inst.sets, x, crit, prestep=prestep, keep_iterates=True)
    rate = empirical_rate(res)
    print(f"{method:5s} prestep={prestep:4s} {res.iterations:4d} iterations, tail rate {rate:.6f}")
