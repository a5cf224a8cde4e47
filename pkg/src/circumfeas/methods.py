"""One-step projection/reflection operators and the iterative solver driver."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .circumcenter import DEDUPE_TOL, circumcenter
from .errors import (
    DegenerateCircumcenterError,
    InvalidConfigError,
    InvalidInputError,
    UnsupportedCriterionError,
)
from .geometry import AffineSubspace, affine_intersection, as_vector, subspace_sum

MAX_ITER = 100_000
FALLBACK_BUDGET = 10
# Iterates are kept in the trace only up to this ambient dimension.
TRACE_DIM_LIMIT = 16


class MethodKind(enum.Enum):
    MAP = "map"
    DRM = "drm"
    CDRM = "cdrm"
    CIMMINO = "cimmino"
    C_CIMMINO = "c-cimmino"
    C_MAP = "c-map"
    CDRM_MULTISET = "cdrm-multiset"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for m in cls:
            if m.value == key:
                return m
        raise InvalidConfigError(f"unknown method {name!r}")


class CriterionKind(enum.Enum):
    TRUE_ERROR = "true"
    GAP_DISTANCE = "gap"
    FIXED_POINT_RESIDUAL = "fixed"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"true_error": "true", "gap_distance": "gap", "fixed_point_residual": "fixed"}
        key = aliases.get(key, key)
        for c in cls:
            if c.value == key:
                return c
        raise InvalidConfigError(f"unknown stopping criterion {name!r}")


class Prestep(enum.Enum):
    NONE = "none"
    PROJECT_U = "u"
    PROJECT_V = "v"
    PROJECT_SUM = "sum"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"project_u": "u", "project_v": "v", "project_sum": "sum"}
        key = aliases.get(key, key)
        for p in cls:
            if p.value == key:
                return p
        raise InvalidConfigError(f"unknown prestep {name!r}")


class StopReason(enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    DEGENERATE_CIRCUMCENTER = "degenerate_circumcenter"


@dataclass(frozen=True)
class StopCriterion:
    kind: CriterionKind
    tolerance: float

    def __post_init__(self):
        object.__setattr__(self, "kind", CriterionKind.parse(self.kind))
        if not (self.tolerance > 0):
            raise InvalidConfigError("tolerance must be positive")


@dataclass(frozen=True, eq=False)
class IterationRecord:
    index: int
    iterate: np.ndarray | None
    true_error: float | None
    gap: float
    step_norm: float


@dataclass(eq=False)
class RunResult:
    method: MethodKind
    records: list = field(default_factory=list)
    iterations: int = 0
    stop_reason: StopReason = StopReason.MAX_ITER
    final_iterate: np.ndarray | None = None
    start: np.ndarray | None = None
    reference: np.ndarray | None = None
    fallbacks: int = 0

    @property
    def final_record(self):
        return self.records[-1]

    def errors(self):
        return np.array([r.true_error for r in self.records], dtype=float)

    def gaps(self):
        return np.array([r.gap for r in self.records])


# ---------------------------------------------------------------------------
# one-step operators


def drm_step(u, v, x):
    """Douglas-Rachford step ``(x + R_V R_U x) / 2``."""
    return 0.5 * (x + v.reflect(u.reflect(x)))


def cdrm_step(u, v, x, dedupe_tol=DEDUPE_TOL):
    """Circumcenter of ``{x, R_U x, R_V R_U x}``."""
    y = u.reflect(x)
    z = v.reflect(y)
    return circumcenter([x, y, z], dedupe_tol)


def map_step(u, v, x):
    return v.project(u.project(x))


def variant_step(kind, u, v, x, dedupe_tol=DEDUPE_TOL):
    """Cimmino, circumcentered Cimmino and circumcentered MAP steps."""
    kind = MethodKind.parse(kind)
    if kind is MethodKind.CIMMINO:
        return 0.5 * (u.reflect(x) + v.reflect(x))
    if kind is MethodKind.C_CIMMINO:
        return circumcenter([x, u.reflect(x), v.reflect(x)], dedupe_tol)
    if kind is MethodKind.C_MAP:
        pu = u.project(x)
        return circumcenter([x, 2.0 * pu - x, v.reflect(pu)], dedupe_tol)
    raise InvalidConfigError(f"variant_step does not handle {kind.name}")


def reflection_chain(sets, x):
    """``[x, R_1 x, R_2 R_1 x, ..., R_m ... R_1 x]``."""
    chain = [x]
    for s in sets:
        chain.append(s.reflect(chain[-1]))
    return chain


def multiset_cdrm_step(sets, x, dedupe_tol=DEDUPE_TOL):
    """Circumcenter of the cumulative reflection chain through every set."""
    if len(sets) < 2:
        raise InvalidConfigError("the many-set step needs at least two sets")
    return circumcenter(reflection_chain(sets, x), dedupe_tol)


def gap_distance(u, v, x):
    """``||P_U x - P_V x||``."""
    return float(np.linalg.norm(u.project(x) - v.project(x)))


def set_gap(sets, x):
    """Largest gap between consecutive sets; equals ``gap_distance`` for two sets."""
    proj = [s.project(x) for s in sets]
    return max(float(np.linalg.norm(a - b)) for a, b in zip(proj, proj[1:]))


def _one_step(method, sets, x):
    if method is MethodKind.CDRM_MULTISET:
        return multiset_cdrm_step(sets, x)
    u, v = sets
    if method is MethodKind.DRM:
        return drm_step(u, v, x)
    if method is MethodKind.CDRM:
        return cdrm_step(u, v, x)
    if method is MethodKind.MAP:
        return map_step(u, v, x)
    return variant_step(method, u, v, x)


def _pair_step(method, u, v, x, pu, pv):
    """One step for two sets reusing ``pu = P_U x`` and ``pv = P_V x``."""
    if method is MethodKind.MAP:
        return v.project(pu)
    if method is MethodKind.CIMMINO:
        return pu + pv - x
    y = 2.0 * pu - x
    if method is MethodKind.C_CIMMINO:
        return circumcenter([x, y, 2.0 * pv - x])
    if method is MethodKind.C_MAP:
        return circumcenter([x, y, v.reflect(pu)])
    z = v.reflect(y)
    if method is MethodKind.DRM:
        return 0.5 * (x + z)
    return circumcenter([x, y, z])


def _fallback_step(method, sets, x):
    # the un-circumcentered parent of each circumcentered method
    if method is MethodKind.C_CIMMINO:
        return variant_step(MethodKind.CIMMINO, sets[0], sets[1], x)
    if method is MethodKind.C_MAP:
        return map_step(sets[0], sets[1], x)
    return 0.5 * (x + reflection_chain(sets, x)[-1])


# ---------------------------------------------------------------------------
# driver


def _check_sets(method, sets):
    if method is MethodKind.CDRM_MULTISET:
        if len(sets) < 2:
            raise InvalidConfigError("cdrm-multiset needs at least two sets")
    elif len(sets) != 2:
        raise InvalidConfigError(f"{method.value} needs exactly two sets, got {len(sets)}")
    n = sets[0].ambient_dim
    if any(s.ambient_dim != n for s in sets):
        raise InvalidInputError("sets live in different ambient dimensions")
    return n


def sum_projector(sets):
    """Projection onto the affine sum ``p + (U_1 + ... + U_m)`` for a common point ``p``."""
    if not all(s.is_affine for s in sets):
        raise InvalidConfigError("the sum prestep needs affine sets")
    common = affine_intersection(sets)
    lin = sets[0].linear_part
    for s in sets[1:]:
        lin = subspace_sum(lin, s.linear_part)
    return AffineSubspace(lin.basis, common.offset)


def apply_prestep(prestep, sets, x):
    prestep = Prestep.parse(prestep)
    if prestep is Prestep.NONE:
        return np.array(x, dtype=float)
    if prestep is Prestep.PROJECT_U:
        return sets[0].project(x)
    if prestep is Prestep.PROJECT_V:
        return sets[1].project(x)
    return sum_projector(sets).project(x)


def solve(
    method,
    sets,
    x0,
    criterion,
    max_iter=MAX_ITER,
    prestep=Prestep.NONE,
    *,
    reference=None,
    keep_iterates=None,
    fallback_budget=FALLBACK_BUDGET,
):
    """Iterate a one-step operator until a stopping criterion is met.

    Parameters
    ----------
    method : MethodKind or str
    sets : sequence of ProjectableSet
        Exactly two sets, or at least two for ``CDRM_MULTISET``.
    x0 : array_like
        Initial point (before the optional feasibility prestep).
    criterion : StopCriterion
    max_iter : int
    prestep : Prestep or str
        Optional projection of ``x0`` onto U, V or U+V before iterating.
    reference : array_like, optional
        Solution used for the true error.  When omitted and the sets are
        affine, the best approximation ``P_{∩ sets}(x0)`` is used for the
        ``TRUE_ERROR`` criterion.
    keep_iterates : bool, optional
        Store iterates in the trace; defaults to ``n <= 16``.
    fallback_budget : int
        Consecutive degenerate circumcenters tolerated, each replaced by the
        parent (non-circumcentered) step, before aborting.

    Returns
    -------
    RunResult
    """
    method = MethodKind.parse(method)
    sets = list(sets)
    n = _check_sets(method, sets)
    x0 = as_vector(x0, n)
    if max_iter < 0:
        raise InvalidConfigError("max_iter must be non-negative")
    crit = criterion.kind
    if reference is None and crit is CriterionKind.TRUE_ERROR:
        if not all(s.is_affine for s in sets):
            raise UnsupportedCriterionError("the true error needs affine sets")
        reference = affine_intersection(sets).project(x0)
    if reference is not None:
        reference = as_vector(reference, n)
    if keep_iterates is None:
        keep_iterates = n <= TRACE_DIM_LIMIT

    x = apply_prestep(prestep, sets, x0)
    tol = criterion.tolerance
    result = RunResult(method=method, start=x.copy(), reference=reference)
    two = len(sets) == 2
    u, v = sets[0], sets[1]

    cache = {}

    def record(k, x, step):
        if two:
            cache["pu"], cache["pv"] = pu, pv = u.project(x), v.project(x)
            d = pu - pv
            gap = math.sqrt(d @ d)
        else:
            gap = set_gap(sets, x)
        if reference is None:
            err = None
        else:
            e = x - reference
            err = math.sqrt(e @ e)
        result.records.append(
            IterationRecord(k, x.copy() if keep_iterates else None, err, gap, step)
        )
        if crit is CriterionKind.TRUE_ERROR:
            return err
        if crit is CriterionKind.GAP_DISTANCE:
            return gap
        return step

    value = record(0, x, math.nan)
    if crit is not CriterionKind.FIXED_POINT_RESIDUAL and value < tol:
        result.stop_reason = StopReason.CONVERGED
        result.final_iterate = x
        return result

    consecutive = 0
    k = 0
    while k < max_iter:
        try:
            if two:
                x_new = _pair_step(method, u, v, x, cache["pu"], cache["pv"])
            else:
                x_new = _one_step(method, sets, x)
            consecutive = 0
        except DegenerateCircumcenterError:
            consecutive += 1
            if consecutive > fallback_budget:
                result.stop_reason = StopReason.DEGENERATE_CIRCUMCENTER
                break
            result.fallbacks += 1
            x_new = _fallback_step(method, sets, x)
        k += 1
        d = x_new - x
        step = math.sqrt(d @ d)
        x = x_new
        value = record(k, x, step)
        if value < tol:
            result.stop_reason = StopReason.CONVERGED
            break
    result.iterations = k
    result.final_iterate = x
    return result
