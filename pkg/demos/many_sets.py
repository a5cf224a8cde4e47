"""Three lines through the origin and the circumcentered Cimmino/MAP steps.

The reflection chain x, R_1 x, R_2 R_1 x, R_3 R_2 R_1 x stays on a circle
about the origin, so its circumcenter is the origin itself.
"""

import numpy as np

from circumfeas import StopCriterion, gallery, solve, variant_step
from circumfeas.methods import reflection_chain

inst = gallery("three_lines")
x = inst.default_start()
chain = reflection_chain(inst.sets, x)
print("chain radii:", [round(float(np.linalg.norm(p)), 12) for p in chain])

res = solve("cdrm-multiset", inst.sets, x, StopCriterion("gap", 1e-12))
print(f"many-set C-DRM: {res.iterations} iteration(s) to {np.round(res.final_iterate, 12)}")

u, v = inst.sets[:2]
for kind in ("cimmino", "c-cimmino", "c-map"):
    print(f"{kind:9s} one step from {x}: {np.round(variant_step(kind, u, v, x), 6)}")
