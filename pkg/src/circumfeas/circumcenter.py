"""Circumcenters of finite point sets via the Gram linear system.

For points ``p_0, ..., p_m`` with anchor ``x = p_0`` and displacements
``s_i = p_i - x`` the circumcenter is ``x + sum_i c_i s_i`` where ``c`` solves

    G c = r,    G_ij = <s_i, s_j>,    r_i = ||s_i||^2 / 2.

The Gram system is factored by a Cholesky sweep that stops at the first pivot
below ``1e-12 * trace(G) / m``; no regularization is ever applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCircumcenterError, InvalidInputError

DEDUPE_TOL = 1e-12
PIVOT_TOL = 1e-12
# Relative (to the point spread) equidistance tolerance for accepting the
# circumcenter of an affinely dependent but concyclic point set.
CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CircumcenterSystem:
    """Assembled and solved Gram system for a set of points."""

    anchor: np.ndarray
    displacements: np.ndarray  # (m, n), row i is s_i
    gram: np.ndarray
    rhs: np.ndarray
    coefficients: np.ndarray

    @property
    def residual(self):
        return float(np.linalg.norm(self.gram @ self.coefficients - self.rhs))

    @property
    def point(self):
        return self.anchor + self.coefficients @ self.displacements


def _as_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InvalidInputError("expected a non-empty list of equal-length vectors")
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError("points have non-finite entries")
    return pts


def _cholesky(g, tol):
    """Cholesky factor of ``g``; returns ``(L, k)`` where ``k`` is the number
    of pivots above ``tol`` processed before the first failure."""
    m = g.shape[0]
    low = np.zeros_like(g)
    for j in range(m):
        d = g[j, j] - low[j, :j] @ low[j, :j]
        if d <= tol:
            return low, j
        low[j, j] = np.sqrt(d)
        low[j + 1:, j] = (g[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low, m


def _numerical_rank(g, tol):
    return int(np.sum(np.linalg.eigvalsh(g) > tol))


def _solve_chol(low, b):
    return _backward(low.T, _forward(low, b))


def _forward(low, b):
    y = np.empty_like(b)
    for i in range(len(b)):
        y[i] = (b[i] - low[i, :i] @ y[:i]) / low[i, i]
    return y


def _backward(up, y):
    x = np.empty_like(y)
    for i in range(len(y) - 1, -1, -1):
        x[i] = (y[i] - up[i, i + 1:] @ x[i + 1:]) / up[i, i]
    return x


def build_system(points):
    """Assemble and solve the Gram system anchored at ``points[0]``.

    Raises
    ------
    DegenerateCircumcenterError
        If the displacement vectors are linearly dependent.
    """
    pts = _as_points(points)
    if pts.shape[0] < 2:
        raise InvalidInputError("build_system needs at least two points")
    anchor = pts[0]
    disp = pts[1:] - anchor
    gram = disp @ disp.T
    rhs = 0.5 * np.diag(gram).copy()
    m = gram.shape[0]
    tol = PIVOT_TOL * np.trace(gram) / m
    low, k = _cholesky(gram, tol)
    if k < m:
        rank = _numerical_rank(gram, tol)
        raise DegenerateCircumcenterError(
            f"singular Gram matrix (rank {rank} < {m})", rank=rank, size=m
        )
    coef = _solve_chol(low, rhs)
    return CircumcenterSystem(anchor, disp, gram, rhs, coef)


def dedupe(points, tol=DEDUPE_TOL):
    """Drop points within ``tol * (1 + max norm)`` of an earlier point."""
    pts = _as_points(points)
    scale = tol * (1.0 + float(np.max(np.linalg.norm(pts, axis=1))))
    kept = [pts[0]]
    for p in pts[1:]:
        if all(np.linalg.norm(p - q) > scale for q in kept):
            kept.append(p)
    return np.array(kept)


def _independent_subset(pts):
    """Indices of a maximal affinely independent prefix-greedy subset."""
    disp = pts[1:] - pts[0]
    gram = disp @ disp.T
    tol = PIVOT_TOL * np.trace(gram) / gram.shape[0]
    chosen = []
    for i in range(gram.shape[0]):
        trial = chosen + [i]
        sub = gram[np.ix_(trial, trial)]
        _, k = _cholesky(sub, tol)
        if k == len(trial):
            chosen = trial
    return [0] + [i + 1 for i in chosen]


def _is_vector_triple(points):
    if not isinstance(points, (list, tuple)) or len(points) != 3:
        return False
    x = points[0]
    return all(
        isinstance(p, np.ndarray) and p.dtype == np.float64 and p.ndim == 1
        and p.shape == x.shape
        for p in points
    )


def _triangle(x, y, z, dedupe_tol):
    """Fast path for three points; ``None`` when the Gram matrix is singular."""
    a = y - x
    b = z - x
    c = z - y
    gaa, gbb, gab = a @ a, b @ b, a @ b
    scale = dedupe_tol * (1.0 + math.sqrt(max(x @ x, y @ y, z @ z)))
    same_xy = math.sqrt(gaa) <= scale
    same_xz = math.sqrt(gbb) <= scale
    same_yz = math.sqrt(c @ c) <= scale
    if same_xy:
        return x.copy() if same_xz else 0.5 * (x + z)
    if same_xz or same_yz:
        return 0.5 * (x + y)
    tol = PIVOT_TOL * 0.5 * (gaa + gbb)
    if gaa <= tol:
        return None
    det = gaa * gbb - gab * gab
    if det <= tol * gaa:
        return None
    alpha = 0.5 * gbb * (gaa - gab) / det
    beta = 0.5 * gaa * (gbb - gab) / det
    return x + alpha * a + beta * b


def circumcenter(points, dedupe_tol=DEDUPE_TOL):
    """Point of the affine hull of ``points`` equidistant to all of them.

    Coincident points are merged first.  One remaining point is its own
    circumcenter and two remaining points give their midpoint.  If the
    remaining points are affinely dependent, the circumcenter of a maximal
    affinely independent subset is returned provided it is equidistant to
    every point (concyclic configurations); otherwise the configuration is
    degenerate.

    Raises
    ------
    DegenerateCircumcenterError
        Affinely dependent points with no common circumcenter, e.g. three
        distinct collinear points.
    """
    if _is_vector_triple(points):
        c = _triangle(*points, dedupe_tol)
        if c is not None:
            return c
    pts = dedupe(points, dedupe_tol)
    if pts.shape[0] == 1:
        return pts[0].copy()
    if pts.shape[0] == 2:
        return 0.5 * (pts[0] + pts[1])
    try:
        return build_system(pts).point
    except DegenerateCircumcenterError as exc:
        sub = pts[_independent_subset(pts)]
        c = sub[0] if len(sub) == 1 else build_system(sub).point
        dist = np.linalg.norm(pts - c, axis=1)
        spread = float(np.max(np.linalg.norm(pts[1:] - pts[0], axis=1)))
        if dist.max() - dist.min() > CONSISTENCY_TOL * spread:
            raise DegenerateCircumcenterError(
                f"points are affinely dependent and not concyclic (rank {exc.rank})",
                rank=exc.rank,
                size=exc.size,
            ) from None
        return c
