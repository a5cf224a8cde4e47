"""Orthonormal frames, projectable sets and subspace algebra.

Subspaces are stored as orthonormal column frames ``Q`` of shape ``(n, k)``
so that a projection costs two matrix-vector products, ``Q @ (Q.T @ x)``.
All set objects are immutable; their arrays are flagged read-only.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleInstanceError, InvalidInputError, UndefinedProjectionError

# Singular values of Q_U^T Q_V at or above 1 - INTERSECTION_TOL are treated
# as directions shared by both subspaces.  Also used by the analysis module.
INTERSECTION_TOL = 1e-10
RANK_TOL = 1e-12
SPHERE_CENTER_TOL = 1e-12


def as_vector(x, n=None):
    """Return ``x`` as a finite 1-D float array, optionally checking its length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InvalidInputError(f"expected a 1-D vector, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise InvalidInputError(f"expected a vector of length {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vector has non-finite entries")
    return v


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal frame of ``k`` columns in ``R^n`` (``k`` may be zero)."""

    ambient_dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).reshape(self.ambient_dim, -1)
        if m.shape[1] > self.ambient_dim:
            raise InvalidInputError("more orthonormal columns than the ambient dimension")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self):
        return self.matrix.shape[1]

    @property
    def columns(self):
        return [self.matrix[:, j] for j in range(self.dim)]

    def orthonormality_error(self):
        """Max-norm of ``Q^T Q - I``."""
        if self.dim == 0:
            return 0.0
        return float(np.max(np.abs(self.matrix.T @ self.matrix - np.eye(self.dim))))


def orthonormalize(columns, ambient_dim):
    """Orthonormal frame spanning the given columns.

    Classical Gram-Schmidt with one re-orthogonalization pass.  A column whose
    residual norm is at most ``1e-12 * max(1, largest input norm)`` is treated
    as dependent and dropped.

    Parameters
    ----------
    columns : sequence of array_like or ndarray of shape (n, k)
        Input vectors.  A 2-D array is read column-wise.
    ambient_dim : int
        Length ``n`` of every column.
    """
    n = int(ambient_dim)
    if isinstance(columns, np.ndarray) and columns.ndim == 2:
        a = np.asarray(columns, dtype=float)
    else:
        cols = [as_vector(c) for c in columns]
        a = np.column_stack(cols) if cols else np.zeros((n, 0))
    if a.shape[0] != n:
        raise InvalidInputError(f"columns must have length {n}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("columns have non-finite entries")
    if a.shape[1] == 0:
        return OrthonormalBasis(n, np.zeros((n, 0)))

    norms = np.linalg.norm(a, axis=0)
    drop_tol = RANK_TOL * max(1.0, float(norms.max()))
    q = np.empty((n, min(n, a.shape[1])))
    k = 0
    for j in range(a.shape[1]):
        if k == n:
            break
        v = a[:, j].copy()
        for _ in range(2):
            if k:
                v -= q[:, :k] @ (q[:, :k].T @ v)
        r = np.linalg.norm(v)
        if r <= drop_tol:
            continue
        q[:, k] = v / r
        k += 1
    return OrthonormalBasis(n, q[:, :k])


class ProjectableSet(abc.ABC):
    """A closed set with a (single-valued) nearest-point map."""

    ambient_dim: int
    #: True for linear and affine subspaces.
    is_affine = False

    @abc.abstractmethod
    def project(self, x):
        """Nearest point of the set to ``x``."""

    def reflect(self, x):
        return 2.0 * self.project(x) - x

    def distance(self, x):
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tol=1e-10):
        return self.distance(x) <= tol * (1.0 + float(np.linalg.norm(x)))


class LinearSubspace(ProjectableSet):
    """Subspace through the origin, stored as an orthonormal frame."""

    is_affine = True

    def __init__(self, basis):
        if not isinstance(basis, OrthonormalBasis):
            raise TypeError("LinearSubspace expects an OrthonormalBasis")
        self.basis = basis
        self.ambient_dim = basis.ambient_dim
        self._q = basis.matrix

    @classmethod
    def span(cls, vectors, ambient_dim=None):
        """Subspace spanned by arbitrary (possibly dependent) vectors."""
        vectors = [as_vector(v) for v in vectors]
        if ambient_dim is None:
            if not vectors:
                raise InvalidInputError("ambient_dim is required for an empty span")
            ambient_dim = vectors[0].shape[0]
        return cls(orthonormalize(vectors, ambient_dim))

    @classmethod
    def zero(cls, n):
        return cls(OrthonormalBasis(n, np.zeros((n, 0))))

    @classmethod
    def full(cls, n):
        return cls(OrthonormalBasis(n, np.eye(n)))

    @property
    def dim(self):
        return self.basis.dim

    @property
    def matrix(self):
        return self._q

    @property
    def offset(self):
        return np.zeros(self.ambient_dim)

    @property
    def linear_part(self):
        return self

    def project(self, x):
        q = self._q
        if q.shape[1] == 0:
            return np.zeros_like(x, dtype=float)
        return q @ (q.T @ x)

    def projector(self):
        """Dense ``n x n`` orthogonal projector matrix."""
        return self._q @ self._q.T

    def translate(self, p):
        return AffineSubspace(self.basis, p)

    def __repr__(self):
        return f"LinearSubspace(n={self.ambient_dim}, dim={self.dim})"


class AffineSubspace(ProjectableSet):
    """Translate ``offset + span(basis)`` of a linear subspace."""

    is_affine = True

    def __init__(self, basis, offset):
        if isinstance(basis, LinearSubspace):
            basis = basis.basis
        self.basis = basis
        self.ambient_dim = basis.ambient_dim
        self._q = basis.matrix
        self._p = _frozen(as_vector(offset, basis.ambient_dim))

    @property
    def dim(self):
        return self.basis.dim

    @property
    def matrix(self):
        return self._q

    @property
    def offset(self):
        return self._p

    @property
    def linear_part(self):
        return LinearSubspace(self.basis)

    def project(self, x):
        q = self._q
        d = x - self._p
        if q.shape[1] == 0:
            return self._p.copy()
        return self._p + q @ (q.T @ d)

    def translate(self, p):
        return AffineSubspace(self.basis, self._p + p)

    def __repr__(self):
        return f"AffineSubspace(n={self.ambient_dim}, dim={self.dim})"


class Ball(ProjectableSet):
    """Closed Euclidean ball."""

    def __init__(self, center, radius):
        self.center = _frozen(as_vector(center))
        self.radius = float(radius)
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise InvalidInputError("ball radius must be positive and finite")
        self.ambient_dim = self.center.shape[0]

    def project(self, x):
        d = x - self.center
        r = np.linalg.norm(d)
        if r <= self.radius:
            return np.array(x, dtype=float)
        return self.center + (self.radius / r) * d

    def __repr__(self):
        return f"Ball(center={self.center.tolist()}, radius={self.radius})"


class Sphere(ProjectableSet):
    """Euclidean sphere; projection is undefined at the center."""

    def __init__(self, center, radius):
        self.center = _frozen(as_vector(center))
        self.radius = float(radius)
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise InvalidInputError("sphere radius must be positive and finite")
        self.ambient_dim = self.center.shape[0]

    def project(self, x):
        d = x - self.center
        r = np.linalg.norm(d)
        if r <= SPHERE_CENTER_TOL:
            raise UndefinedProjectionError("projection onto a sphere is undefined at its center")
        return self.center + (self.radius / r) * d

    def __repr__(self):
        return f"Sphere(center={self.center.tolist()}, radius={self.radius})"


def _check_dim(s, x):
    x = as_vector(x)
    if x.shape[0] != s.ambient_dim:
        raise InvalidInputError(
            f"vector of length {x.shape[0]} paired with a set in R^{s.ambient_dim}"
        )
    return x


def project(s, x):
    """Project ``x`` onto the set ``s`` (validated entry point)."""
    return s.project(_check_dim(s, x))


def reflect(s, x):
    """Reflect ``x`` through the set ``s``: ``2 P_s(x) - x``."""
    return s.reflect(_check_dim(s, x))


def _same_space(u, v):
    if u.ambient_dim != v.ambient_dim:
        raise InvalidInputError(
            f"subspaces live in R^{u.ambient_dim} and R^{v.ambient_dim}"
        )


def subspace_sum(u, v):
    """``U + V = span(U ∪ V)``."""
    _same_space(u, v)
    cols = np.hstack([u.matrix, v.matrix])
    return LinearSubspace(orthonormalize(cols, u.ambient_dim))


def principal_cosines(u, v):
    """Singular value decomposition of ``Q_U^T Q_V``.

    Returns ``(left, cosines, right)`` with cosines in descending order,
    clipped to ``[0, 1]``.
    """
    _same_space(u, v)
    m = u.matrix.T @ v.matrix
    if m.size == 0:
        return np.zeros((u.dim, 0)), np.zeros(0), np.zeros((v.dim, 0))
    left, s, right_t = np.linalg.svd(m, full_matrices=False)
    return left, np.clip(s, 0.0, 1.0), right_t.T


def subspace_intersection(u, v):
    """``U ∩ V`` from the principal directions with cosine ``>= 1 - 1e-10``."""
    left, s, _ = principal_cosines(u, v)
    shared = s >= 1.0 - INTERSECTION_TOL
    if not np.any(shared):
        return LinearSubspace.zero(u.ambient_dim)
    return LinearSubspace(orthonormalize(u.matrix @ left[:, shared], u.ambient_dim))


def orthogonal_complement(u):
    n, k = u.ambient_dim, u.dim
    if k == 0:
        return LinearSubspace.full(n)
    if k == n:
        return LinearSubspace.zero(n)
    q, _ = np.linalg.qr(u.matrix, mode="complete")
    return LinearSubspace(orthonormalize(q[:, k:], n))


def same_subspace(u, v, tol=1e-10):
    """Span equality, measured by the projector difference in max-norm."""
    if u.ambient_dim != v.ambient_dim or u.dim != v.dim:
        return False
    return float(np.max(np.abs(u.projector() - v.projector()), initial=0.0)) <= tol


def affine_intersection(sets):
    """Intersection of linear/affine subspaces as an ``AffineSubspace``.

    The offset is the minimum-norm point of the intersection.

    Raises
    ------
    InfeasibleInstanceError
        If the intersection is empty.
    """
    sets = list(sets)
    if not sets:
        raise InvalidInputError("need at least one subspace")
    for s in sets:
        if not s.is_affine:
            raise InvalidInputError(f"{s!r} is not an affine subspace")
    acc_lin = sets[0].linear_part
    acc_p = np.array(sets[0].offset, dtype=float)
    for s in sets[1:]:
        _same_space(acc_lin, s)
        b = np.asarray(s.offset, dtype=float)
        qa, qb = acc_lin.matrix, s.matrix
        m = np.hstack([qa, -qb])
        rhs = b - acc_p
        if m.shape[1]:
            coef = np.linalg.lstsq(m, rhs, rcond=None)[0]
            pa = acc_p + qa @ coef[: qa.shape[1]]
            pb = b + qb @ coef[qa.shape[1]:]
        else:
            pa, pb = acc_p, b
        scale = 1.0 + np.linalg.norm(acc_p) + np.linalg.norm(b)
        if np.linalg.norm(pa - pb) > 1e-9 * scale:
            raise InfeasibleInstanceError("affine subspaces do not intersect")
        acc_lin = subspace_intersection(acc_lin, s.linear_part)
        acc_p = 0.5 * (pa + pb)
    acc_p = acc_p - acc_lin.project(acc_p)
    return AffineSubspace(acc_lin.basis, acc_p)
