"""Friedrichs angle, fixed-point sets, best approximation and rate estimates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UndefinedRateError
from .geometry import (
    INTERSECTION_TOL,
    LinearSubspace,
    affine_intersection,
    orthogonal_complement,
    orthonormalize,
    principal_cosines,
    subspace_intersection,
)

DENSE_NORM_LIMIT = 512
SELF_CHECK_TOL = 1e-8
RATE_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class FriedrichsAngle:
    cosine: float
    principal_cosines: np.ndarray
    intersection_dim: int

    @property
    def angle(self):
        return float(np.arccos(self.cosine))


def _linear(s):
    return s.linear_part if s.is_affine else s


def _power_norm(apply, apply_t, n, rtol=1e-10, max_iter=10_000, seed=0):
    """Largest singular value of a linear map by power iteration on A^T A."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        w = apply_t(apply(v))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new = np.sqrt(nw)
        v = w / nw
        if abs(new - sigma) <= rtol * new:
            return float(new)
        sigma = new
    return float(sigma)


def operator_gap_norm(u, v):
    """``||P_V P_U - P_{U∩V}||`` in the operator 2-norm."""
    w = subspace_intersection(u, v)
    n = u.ambient_dim
    if n <= DENSE_NORM_LIMIT:
        m = v.projector() @ u.projector() - w.projector()
        return float(np.linalg.norm(m, 2))
    return _power_norm(
        lambda x: v.project(u.project(x)) - w.project(x),
        lambda x: u.project(v.project(x)) - w.project(x),
        n,
    )


def friedrichs_cosine(u, v, check=True):
    """Cosine of the Friedrichs angle between two (linear parts of) subspaces.

    The principal cosines are the singular values of ``Q_U^T Q_V``; those at
    or above ``1 - 1e-10`` count as intersection directions and the cosine
    is the largest of the rest (0 when there is none).  With ``check`` the
    value is compared against ``||P_V P_U - P_{U∩V}||``.
    """
    u, v = _linear(u), _linear(v)
    if u.ambient_dim != v.ambient_dim:
        raise InvalidInputError("subspaces live in different ambient dimensions")
    _, s, _ = principal_cosines(u, v)
    shared = s >= 1.0 - INTERSECTION_TOL
    rest = s[~shared]
    cosine = float(rest.max()) if rest.size else 0.0
    if check:
        other = operator_gap_norm(u, v)
        if abs(other - cosine) > SELF_CHECK_TOL:
            raise ArithmeticError(
                f"Friedrichs cosine self-check failed: {cosine!r} vs operator norm {other!r}"
            )
    return FriedrichsAngle(cosine, s, int(shared.sum()))


def fix_t_basis(u, v):
    """Basis of ``(U∩V) ⊕ (U^⊥∩V^⊥)``, the fixed points of the DR operator."""
    u, v = _linear(u), _linear(v)
    a = subspace_intersection(u, v)
    b = subspace_intersection(orthogonal_complement(u), orthogonal_complement(v))
    return LinearSubspace(orthonormalize(np.hstack([a.matrix, b.matrix]), u.ambient_dim))


def best_approximation(u, v, x, check_tol=1e-10):
    """``P_{U∩V}(x)`` for linear or affine subspaces.

    Raises InfeasibleInstanceError when affine sets do not intersect.
    """
    inter = affine_intersection([u, v])
    xbar = inter.project(np.asarray(x, dtype=float))
    if inter.dim:
        resid = inter.matrix.T @ (x - xbar)
        bound = check_tol * (1.0 + np.linalg.norm(x))
        if np.max(np.abs(resid)) > bound:
            raise ArithmeticError("best approximation failed the orthogonality check")
    return xbar


def error_sequence(result, reference=None):
    """Distances of the recorded iterates to ``reference``.

    Falls back to the recorded true errors when iterates were not kept.
    """
    recs = result.records
    if reference is not None and recs and recs[0].iterate is not None:
        ref = np.asarray(reference, dtype=float)
        return np.array([np.linalg.norm(r.iterate - ref) for r in recs])
    if recs and all(r.true_error is not None for r in recs):
        return np.array([r.true_error for r in recs])
    raise UndefinedRateError("run has neither iterates nor true errors")


def empirical_rate(result, reference=None):
    """Geometric mean of successive error ratios over the last half of a run.

    Ratios whose denominator is below 1e-14 are skipped; an error below 1e-14
    after a larger one counts as exact convergence and makes the rate 0.
    """
    e = error_sequence(result, reference)
    if e.size < 2:
        raise UndefinedRateError("need at least two recorded iterates")
    k = e.size - 1
    start = k // 2
    den = e[start:k]
    num = e[start + 1:]
    keep = den >= RATE_FLOOR
    if not np.any(keep):
        raise UndefinedRateError("no usable error ratios in the tail")
    if np.any(num[keep] < RATE_FLOOR):
        return 0.0
    ratios = num[keep] / den[keep]
    return float(np.exp(np.mean(np.log(ratios))))
