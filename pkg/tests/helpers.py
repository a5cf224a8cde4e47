"""Shared builders for the test suite."""

import math

import numpy as np

from circumfeas import AffineSubspace, LinearSubspace, orthonormalize
from circumfeas.instances import random_pair


def line(degrees, offset=None):
    t = math.radians(degrees)
    s = LinearSubspace.span([[math.cos(t), math.sin(t)]])
    return s if offset is None else AffineSubspace(s.basis, offset)


def random_subspace(rng, n, k):
    return LinearSubspace(orthonormalize(rng.standard_normal((n, k)), n))


def random_affine_instance(seed, n_range=(4, 50)):
    """Random affine pair with a nontrivial intersection, a start and ``P_{U∩V}``."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1], endpoint=True))
    du = int(rng.integers(1, n))
    dv = int(rng.integers(1, n))
    di = int(rng.integers(1, min(du, dv), endpoint=True))
    di = max(di, du + dv - n, 1)
    if di > min(du, dv):
        du, dv, di = 1, 1, 1
    inst = random_pair(n, du, dv, di, seed, affine=True)
    u, v = inst.sets
    x = 3.0 * rng.standard_normal(n)
    return u, v, x, inst.intersection()


def null_space(a, rtol=1e-12):
    """Independent null-space oracle via SVD."""
    _, s, vt = np.linalg.svd(a)
    rank = int((s > rtol * max(a.shape) * (s[0] if s.size else 0)).sum())
    return vt[rank:].T


def circumcenter_oracle(points):
    """Equidistance equations ``2<p_i - p_0, c> = |p_i|^2 - |p_0|^2`` solved by
    SVD least squares, then moved into the affine hull of the points."""
    p = np.asarray(points, dtype=float)
    d = p[1:] - p[0]
    b = np.sum(p[1:] ** 2, axis=1) - np.sum(p[0] ** 2)
    c, *_ = np.linalg.lstsq(2.0 * d, b, rcond=None)
    q, _ = np.linalg.qr(d.T)
    return p[0] + q @ (q.T @ (c - p[0]))


def random_simplex(rng, n, k):
    """``k`` points in general position in ``R^n`` (``k <= n + 1``)."""
    while True:
        p = rng.standard_normal((k, n)) * rng.uniform(0.1, 10.0) + rng.standard_normal(n)
        d = p[1:] - p[0]
        s = np.linalg.svd(d, compute_uv=False)
        if s.size == 0 or s[-1] > 1e-3 * s[0]:
            return p
