import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circumfeas import DegenerateCircumcenterError, build_system, circumcenter
from circumfeas.analysis import best_approximation
from circumfeas.circumcenter import dedupe

from helpers import circumcenter_oracle, random_affine_instance, random_simplex

SQ3 = math.sqrt(3.0)


def test_single_point():
    x = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(circumcenter([x, x, x]), x)


def test_right_triangle():
    c = circumcenter([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
    assert np.allclose(c, [1.0, 1.0])


def test_reflection_triangle():
    pts = [[1.0, 1.0], [1.0, -1.0], [-(1 + SQ3) / 2, (SQ3 - 1) / 2]]
    c = circumcenter(pts)
    assert np.allclose(c, [0.0, 0.0], atol=1e-14)
    assert np.allclose(c, circumcenter_oracle(pts), atol=1e-14)


def test_two_points_give_midpoint():
    assert np.allclose(circumcenter([[0.0, 0.0], [2.0, 0.0]]), [1.0, 0.0])
    assert np.allclose(circumcenter([[0.0, 0.0], [0.0, 0.0], [2.0, 0.0]]), [1.0, 0.0])


def test_build_system_triangle():
    sys_ = build_system([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
    assert np.array_equal(sys_.gram, [[4.0, 0.0], [0.0, 4.0]])
    assert np.array_equal(sys_.rhs, [2.0, 2.0])
    assert np.allclose(sys_.coefficients, [0.5, 0.5])
    assert sys_.residual <= 1e-10 * (1 + np.linalg.norm(sys_.rhs))


def test_build_system_segment():
    sys_ = build_system([[0.0, 0.0], [2.0, 0.0]])
    assert np.array_equal(sys_.gram, [[4.0]])
    assert np.array_equal(sys_.rhs, [2.0])
    assert np.allclose(sys_.coefficients, [0.5])


def test_collinear_points_are_degenerate():
    with pytest.raises(DegenerateCircumcenterError) as info:
        build_system([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    assert info.value.rank == 1
    with pytest.raises(DegenerateCircumcenterError):
        circumcenter([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])


def test_tiny_collinear_points_are_degenerate():
    with pytest.raises(DegenerateCircumcenterError):
        circumcenter([[0.0, 0.0], [1e-7, 0.0], [3e-7, 0.0]])


def test_concyclic_dependent_points():
    # four points on the unit circle: affinely dependent in R^2 but concyclic
    t = np.array([0.3, 1.4, 2.9, 4.4])
    pts = np.column_stack([np.cos(t), np.sin(t)])
    assert np.allclose(circumcenter(pts), [0.0, 0.0], atol=1e-12)
    bent = pts.copy()
    bent[3] *= 1.1
    with pytest.raises(DegenerateCircumcenterError):
        circumcenter(bent)


def test_dedupe_relative_tolerance():
    pts = dedupe([[1e6, 0.0], [1e6 + 1e-7, 0.0], [0.0, 1.0]])
    assert len(pts) == 2


def test_gram_system_residual_and_psd():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        p = random_simplex(rng, n, int(rng.integers(2, n + 2)))
        s = build_system(p)
        assert np.allclose(s.gram, s.gram.T)
        assert np.linalg.eigvalsh(s.gram).min() >= -1e-12 * np.trace(s.gram)
        assert s.residual <= 1e-10 * (1 + np.linalg.norm(s.rhs))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_equidistant_in_hull_and_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    p = random_simplex(rng, n, int(rng.integers(3, min(n + 1, 4) + 1)))
    c = circumcenter(p)
    dist = np.linalg.norm(p - c, axis=1)
    assert dist.max() - dist.min() <= 1e-8 * (1 + np.linalg.norm(p, axis=1).max())
    d = (p[1:] - p[0]).T
    q, _ = np.linalg.qr(d)
    off = c - p[0]
    assert np.linalg.norm(off - q @ (q.T @ off)) <= 1e-10 * (1 + np.linalg.norm(off))
    oracle = circumcenter_oracle(p)
    assert np.linalg.norm(c - oracle) <= 1e-8 * (1 + np.linalg.norm(oracle))


@settings(max_examples=100, deadline=None)
@given(seeds, st.permutations(range(4)))
def test_permutation_invariance(seed, perm):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 9))
    p = random_simplex(rng, n, 4)
    a = circumcenter(p)
    b = circumcenter(p[list(perm)])
    assert np.linalg.norm(a - b) <= 1e-10 * (1 + np.linalg.norm(a))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_reflection_triangle_is_projection_of_intersection_point(seed):
    u, v, x, inter = random_affine_instance(seed, (3, 12))
    y = u.reflect(x)
    z = v.reflect(y)
    c = circumcenter([x, y, z])
    rng = np.random.default_rng(seed)
    w = inter.project(rng.standard_normal(x.shape[0]))
    d = np.array([y - x, z - x]).T
    q, r = np.linalg.qr(d)
    if abs(r[1, 1]) < 1e-8 * abs(r[0, 0]):
        q = q[:, :1]
    expected = x + q @ (q.T @ (w - x))
    assert np.linalg.norm(c - expected) <= 1e-8 * (1 + np.linalg.norm(x))
    assert np.allclose(best_approximation(u, v, x), inter.project(x))
