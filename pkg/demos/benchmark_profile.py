"""A scaled-down version of the random-subspace benchmark.

Each method starts from P_V(x) for the same random x; the iteration counts
are turned into a Dolan-More performance profile.  The full-size run is
``circumfeas bench --n 200 --instances 100 --starts 20 --seed 7 --out records.csv``.
"""

import numpy as np

from circumfeas import StopCriterion
from circumfeas.bench import ExperimentConfig, performance_profile, run_experiment

config = ExperimentConfig(n=60, count=10, starts_per_instance=5, methods=["map", "drm", "cdrm"],
                          criterion=StopCriterion("gap", 1e-6), seed=7, workers=1)
records = run_experiment(config)

for method in ("map", "drm", "cdrm"):
    its = np.array([r.iterations for r in records if r.method == method])
    print(f"{method:5s} median {np.median(its):6.0f}  max {its.max():6d}")

prof = performance_profile(records)
print(f"\nratio cap r_M = {prof.ratio_cap:.3g}")
print("  tau   " + "  ".join(f"{lab:>6s}" for lab in prof.labels))
for tau in (1.0, 1.5, 2.0, 3.0, 5.0, prof.ratio_cap):
    print(f"{tau:6.2f}  " + "  ".join(f"{prof.value(lab, tau):6.2f}" for lab in prof.labels))
