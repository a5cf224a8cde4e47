"""Circumcentered Douglas-Rachford and companion projection/reflection methods."""

from .analysis import (
    FriedrichsAngle,
    best_approximation,
    empirical_rate,
    fix_t_basis,
    friedrichs_cosine,
)
from .circumcenter import CircumcenterSystem, build_system, circumcenter
from .errors import (
    CircumfeasError,
    DegenerateCircumcenterError,
    GenerationError,
    InfeasibleInstanceError,
    InvalidConfigError,
    InvalidInputError,
    UndefinedProjectionError,
    UndefinedRateError,
    UnsupportedCriterionError,
)
from .geometry import (
    AffineSubspace,
    Ball,
    LinearSubspace,
    OrthonormalBasis,
    ProjectableSet,
    Sphere,
    affine_intersection,
    orthogonal_complement,
    orthonormalize,
    project,
    reflect,
    subspace_intersection,
    subspace_sum,
)
from .instances import (
    InstanceKind,
    ProblemInstance,
    canonical_pair,
    gallery,
    random_pair,
)
from .methods import (
    CriterionKind,
    IterationRecord,
    MethodKind,
    Prestep,
    RunResult,
    StopCriterion,
    StopReason,
    cdrm_step,
    drm_step,
    gap_distance,
    map_step,
    multiset_cdrm_step,
    solve,
    variant_step,
)

__version__ = "0.1.0"
