import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circumfeas import (
    AffineSubspace,
    Ball,
    InvalidInputError,
    LinearSubspace,
    Sphere,
    UndefinedProjectionError,
    orthogonal_complement,
    orthonormalize,
    project,
    reflect,
    subspace_intersection,
    subspace_sum,
)
from circumfeas.geometry import affine_intersection, same_subspace

from helpers import line, null_space, random_subspace

E = np.eye(3)


# -- orthonormalize ---------------------------------------------------------


def test_orthonormalize_identity():
    b = orthonormalize([[1.0, 0.0], [0.0, 1.0]], 2)
    assert np.allclose(np.abs(b.matrix), np.eye(2))


def test_orthonormalize_normalizes():
    b = orthonormalize([[3.0, 4.0]], 2)
    assert b.dim == 1
    assert np.allclose(np.abs(b.matrix[:, 0]), [0.6, 0.8])


def test_orthonormalize_drops_dependent_column():
    b = orthonormalize([[1.0, 0.0], [2.0, 0.0]], 2)
    assert b.dim == 1
    assert np.allclose(np.abs(b.matrix[:, 0]), [1.0, 0.0])


def test_orthonormalize_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        orthonormalize([[1.0, np.nan]], 2)


def test_orthonormalize_wrong_length():
    with pytest.raises(InvalidInputError):
        orthonormalize([[1.0, 0.0, 0.0]], 2)


def test_orthonormalize_ill_conditioned_frame():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((40, 10))
    a[:, 9] = a[:, 8] + 1e-9 * rng.standard_normal(40)
    b = orthonormalize(a, 40)
    assert b.orthonormality_error() <= 1e-12
    # the span is unchanged: every input column is reproduced
    q = b.matrix
    assert np.linalg.norm(a - q @ (q.T @ a)) <= 1e-8 * np.linalg.norm(a)


def test_basis_is_read_only():
    b = orthonormalize([[1.0, 0.0]], 2)
    with pytest.raises(ValueError):
        b.matrix[0, 0] = 2.0


# -- project / reflect examples ------------------------------------------------


def test_project_examples():
    assert np.allclose(project(line(0), [1.0, 1.0]), [1.0, 0.0])
    assert np.allclose(project(Ball([0.0, 0.0], 1.0), [2.0, 0.0]), [1.0, 0.0])
    horizontal = AffineSubspace(LinearSubspace.span([[1.0, 0.0]]), [0.0, 1.0])
    assert np.allclose(project(horizontal, [3.0, 5.0]), [3.0, 1.0])


def test_reflect_examples():
    assert np.allclose(reflect(line(0), [1.0, 1.0]), [1.0, -1.0])
    assert np.allclose(reflect(line(0), [4.0, 0.0]), [4.0, 0.0])
    assert np.allclose(reflect(Ball([0.0, 0.0], 1.0), [2.0, 0.0]), [0.0, 0.0])


def test_ball_keeps_interior_points():
    b = Ball([1.0, 1.0], 2.0)
    assert np.array_equal(b.project([1.5, 0.5]), [1.5, 0.5])


def test_sphere_projection_and_center_error():
    s = Sphere([0.0, 0.0], 2.0)
    assert np.allclose(s.project([0.0, 0.5]), [0.0, 2.0])
    with pytest.raises(UndefinedProjectionError):
        s.project([0.0, 0.0])


def test_invalid_radius():
    with pytest.raises(InvalidInputError):
        Ball([0.0], 0.0)
    with pytest.raises(InvalidInputError):
        Sphere([0.0], -1.0)


def test_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        project(line(0), [1.0, 2.0, 3.0])


def test_zero_subspace_projects_to_offset():
    z = LinearSubspace.zero(3)
    assert np.array_equal(z.project([1.0, 2.0, 3.0]), np.zeros(3))
    a = AffineSubspace(z, [1.0, 1.0, 1.0])
    assert np.array_equal(a.project([5.0, 0.0, 2.0]), [1.0, 1.0, 1.0])


def test_affine_offset_invariants():
    rng = np.random.default_rng(0)
    lin = random_subspace(rng, 6, 2)
    a = AffineSubspace(lin, rng.standard_normal(6))
    assert np.allclose(a.project(a.offset), a.offset, atol=1e-12)
    back = a.translate(-a.offset)
    assert np.allclose(back.offset, 0.0, atol=1e-12)
    x = rng.standard_normal(6)
    assert np.allclose(back.project(x), lin.project(x), atol=1e-12)


# -- subspace algebra ------------------------------------------------------------


def test_sum_examples():
    whole = subspace_sum(LinearSubspace.span([[1.0, 0.0]]), LinearSubspace.span([[0.0, 1.0]]))
    assert same_subspace(whole, LinearSubspace.full(2))
    u = LinearSubspace.span([E[0], E[1]])
    assert same_subspace(subspace_sum(u, u), u)
    a = LinearSubspace.span([[1.0, 2.0, 0.5]])
    b = LinearSubspace.span([[-1.0, 0.3, 2.0]])
    stacked = np.hstack([a.matrix, b.matrix])
    assert subspace_sum(a, b).dim == np.linalg.matrix_rank(stacked) == 2


def test_intersection_examples():
    assert subspace_intersection(LinearSubspace.span([E[0]]), LinearSubspace.span([E[1]])).dim == 0
    u = LinearSubspace.span([E[0], E[1]])
    assert same_subspace(subspace_intersection(u, u), u)
    t = math.pi / 3
    v = LinearSubspace.span([E[0], math.cos(t) * E[1] + math.sin(t) * E[2]])
    w = subspace_intersection(u, v)
    assert w.dim == 1
    assert same_subspace(w, LinearSubspace.span([E[0]]))


def test_intersection_matches_null_space_oracle():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(5, 15))
        shared = rng.standard_normal((n, 2))
        u = LinearSubspace(orthonormalize(np.hstack([shared, rng.standard_normal((n, 2))]), n))
        v = LinearSubspace(orthonormalize(np.hstack([shared, rng.standard_normal((n, 1))]), n))
        # x in U∩V iff x = Qu a = Qv b: null space of [Qu, -Qv]
        ns = null_space(np.hstack([u.matrix, -v.matrix]))
        w = subspace_intersection(u, v)
        assert w.dim == ns.shape[1]
        oracle = LinearSubspace.span(list((u.matrix @ ns[: u.dim]).T), n)
        assert same_subspace(w, oracle, 1e-8)


def test_complement_examples():
    c = orthogonal_complement(LinearSubspace.span([E[0]]))
    assert same_subspace(c, LinearSubspace.span([E[1], E[2]]))
    assert orthogonal_complement(LinearSubspace.zero(3)).dim == 3
    rng = np.random.default_rng(1)
    u = random_subspace(rng, 7, 3)
    assert same_subspace(orthogonal_complement(orthogonal_complement(u)), u, 1e-10)


def test_affine_intersection_of_lines():
    a = line(0, [0.0, 1.0])
    b = line(90, [2.0, 0.0])
    w = affine_intersection([a, b])
    assert w.dim == 0
    assert np.allclose(w.offset, [2.0, 1.0])


def test_affine_intersection_empty():
    from circumfeas import InfeasibleInstanceError

    with pytest.raises(InfeasibleInstanceError):
        affine_intersection([line(0, [0.0, 0.0]), line(0, [0.0, 1.0])])


# -- properties ------------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _draw(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    k = int(rng.integers(0, n + 1))
    return rng, n, random_subspace(rng, n, k) if k else LinearSubspace.zero(n)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_projection_residual_is_orthogonal(seed):
    rng, n, s = _draw(seed)
    x = 5.0 * rng.standard_normal(n)
    r = x - s.project(x)
    assert np.max(np.abs(s.matrix.T @ r), initial=0.0) <= 1e-10 * (1 + np.linalg.norm(x))
    p = s.project(x)
    assert np.linalg.norm(s.project(p) - p) <= 1e-10 * (1 + np.linalg.norm(x))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_pythagoras_and_reflection_isometry(seed):
    rng, n, s = _draw(seed)
    x = 5.0 * rng.standard_normal(n)
    pt = s.project(rng.standard_normal(n) * 3.0)
    px = s.project(x)
    lhs = np.linalg.norm(x - px) ** 2
    rhs = np.linalg.norm(x - pt) ** 2 - np.linalg.norm(pt - px) ** 2
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, np.linalg.norm(x - pt) ** 2)
    d1 = np.linalg.norm(x - pt)
    d2 = np.linalg.norm(s.reflect(x) - pt)
    assert abs(d1 - d2) <= 1e-10 * max(1.0, d1)
    assert np.allclose(s.reflect(s.reflect(x)), x, atol=1e-10 * (1 + np.linalg.norm(x)))


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(-10, 10), st.floats(-10, 10))
def test_projection_is_linear(seed, alpha, beta):
    rng, n, s = _draw(seed)
    x, y = rng.standard_normal(n), rng.standard_normal(n)
    lhs = s.project(alpha * x + beta * y)
    rhs = alpha * s.project(x) + beta * s.project(y)
    assert np.linalg.norm(lhs - rhs) <= 1e-10 * (1 + abs(alpha) + abs(beta)) * (
        1 + np.linalg.norm(x) + np.linalg.norm(y))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_midpoint_property(seed):
    rng, n, s = _draw(seed)
    x = 4.0 * rng.standard_normal(n)
    m = s.project(rng.standard_normal(n))
    p = 2.0 * m - x
    gap = abs(s.distance(x) - s.distance(p))
    assert gap <= 1e-10 * (1 + np.linalg.norm(x) + np.linalg.norm(p))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_dimension_formula(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 14))
    di = int(rng.integers(0, n // 2 + 1))
    du = int(rng.integers(di, n - di + 1))
    dv = int(rng.integers(di, n - du + di + 1))
    shared = rng.standard_normal((n, di))
    u = LinearSubspace(orthonormalize(np.hstack([shared, rng.standard_normal((n, du - di))]), n))
    v = LinearSubspace(orthonormalize(np.hstack([shared, rng.standard_normal((n, dv - di))]), n))
    total = subspace_sum(u, v).dim
    inter = subspace_intersection(u, v).dim
    assert total == u.dim + v.dim - inter
    assert orthogonal_complement(u).dim + u.dim == n


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_ball_and_sphere_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    c = rng.standard_normal(n)
    r = float(rng.uniform(0.1, 3.0))
    x = c + 4.0 * rng.standard_normal(n)
    b, s = Ball(c, r), Sphere(c, r)
    pb = b.project(x)
    assert np.linalg.norm(pb - c) <= r * (1 + 1e-12)
    assert np.allclose(b.project(pb), pb)
    assert abs(np.linalg.norm(s.project(x) - c) - r) <= 1e-12 * (1 + r)
    assert np.allclose(s.project(s.project(x)), s.project(x))
