"""Non-affine gallery: a ball tangent to a line and a circle crossing a line.

No convergence theory covers these; the runs only illustrate behaviour.  At
the tangency DRM settles at a point that is in neither set, while C-DRM
reaches the common point.  For the circle both methods find an intersection.
"""

import numpy as np

from circumfeas import StopCriterion, gallery, solve

never = StopCriterion("fixed", 1e-300)


def worst_distance(sets, x):
    return max(s.distance(x) for s in sets)


for name in ("ball_line_tangent", "circle_line"):
    inst = gallery(name)
    x0 = inst.default_start()
    print(f"{name}: start {x0}")
    for method in ("drm", "cdrm"):
        res = solve(method, inst.sets, x0, never, max_iter=2000)
        x = res.final_iterate
        print(f"  {method:5s} -> {np.round(x, 6)}  distance to the sets {worst_distance(inst.sets, x):.1e}"
              f"  (fallback steps: {res.fallbacks})")
