"""Two lines through the origin in the plane.

DRM spirals in towards the intersection at the linear rate c_F, while the
circumcentered step lands on it at once.
"""

import math

import numpy as np

from circumfeas import LinearSubspace, StopCriterion, cdrm_step, drm_step, solve

# the x-axis and the line at 60 degrees; they meet only at the origin
u = LinearSubspace.span([[1.0, 0.0]])
v = LinearSubspace.span([[math.cos(math.pi / 3), math.sin(math.pi / 3)]])
x = np.array([1.0, 1.0])

y = u.reflect(x)   # (1, -1)
z = v.reflect(y)   # R_V R_U x
print("x, R_U x, R_V R_U x:", x, y, np.round(z, 5))
print("distances to the origin:", [round(float(np.linalg.norm(p)), 12) for p in (x, y, z)])

# DR takes the midpoint of x and R_V R_U x; C-DRM takes the circumcenter
print("DRM step: ", np.round(drm_step(u, v, x), 5))
print("C-DRM step:", np.round(cdrm_step(u, v, x), 12))

crit = StopCriterion("gap", 1e-10)
for method in ("drm", "map", "cdrm"):
    res = solve(method, [u, v], x, crit)
    print(f"{method:5s} {res.iterations:4d} iterations, final gap {res.final_record.gap:.1e}")
