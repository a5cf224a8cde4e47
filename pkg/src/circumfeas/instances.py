"""Seeded instance generators and the JSON instance format.

Random draws use numpy's ``PCG64`` bit generator seeded with the integer
seed, so an instance is a pure function of its parameters and seed.
Benchmark instance ``i`` uses seed ``base + i``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import friedrichs_cosine
from .errors import GenerationError, InvalidConfigError
from .geometry import (
    AffineSubspace,
    Ball,
    LinearSubspace,
    OrthonormalBasis,
    Sphere,
    affine_intersection,
    orthonormalize,
)

GENERATION_RETRIES = 5


class InstanceKind(enum.Enum):
    AFFINE_PAIR = "affine_pair"
    AFFINE_MULTI = "affine_multi"
    NONAFFINE = "nonaffine"


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(eq=False)
class ProblemInstance:
    sets: list
    kind: InstanceKind
    reference_solution: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def name(self):
        return self.metadata.get("name", "")

    @property
    def ambient_dim(self):
        return self.sets[0].ambient_dim

    @property
    def friedrichs_cosine(self):
        return self.metadata.get("friedrichs_cosine")

    def intersection(self):
        """Intersection of affine sets (cached)."""
        if self.kind is InstanceKind.NONAFFINE:
            raise InvalidConfigError("intersection is only computed for affine instances")
        if "_intersection" not in self.__dict__:
            self.__dict__["_intersection"] = affine_intersection(self.sets)
        return self.__dict__["_intersection"]

    def best_approximation(self, x):
        """``P_{∩ sets}(x)``; for non-affine instances the stored reference."""
        if self.kind is InstanceKind.NONAFFINE:
            return self.reference_solution
        return self.intersection().project(np.asarray(x, dtype=float))

    def default_start(self):
        x0 = self.metadata.get("x0")
        return None if x0 is None else np.array(x0, dtype=float)

    def to_dict(self):
        d = {
            "name": self.name,
            "kind": self.kind.value,
            "ambient_dim": self.ambient_dim,
            "seed": self.metadata.get("seed"),
            "sets": [set_to_dict(s) for s in self.sets],
        }
        if self.reference_solution is not None:
            d["reference_solution"] = [float(t) for t in self.reference_solution]
        if self.friedrichs_cosine is not None:
            d["friedrichs_cosine"] = float(self.friedrichs_cosine)
        extra = {
            k: v for k, v in self.metadata.items()
            if k not in ("name", "seed", "friedrichs_cosine") and not k.startswith("_")
        }
        if extra:
            d["metadata"] = _plain(extra)
        return d

    def to_json(self):
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        sets = [set_from_dict(s) for s in d["sets"]]
        meta = dict(d.get("metadata", {}))
        meta["name"] = d.get("name", "")
        meta["seed"] = d.get("seed")
        if d.get("friedrichs_cosine") is not None:
            meta["friedrichs_cosine"] = d["friedrichs_cosine"]
        ref = d.get("reference_solution")
        return cls(
            sets=sets,
            kind=InstanceKind(d["kind"]),
            reference_solution=None if ref is None else np.array(ref, dtype=float),
            metadata=meta,
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# serialization


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj, indent=None):
    """JSON text with every float written with 17 significant digits."""
    obj = _plain(obj)

    def enc(o, level):
        pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
        end = "" if indent is None else "\n" + " " * (indent * level)
        sep = ", " if indent is None else ","
        if isinstance(o, bool) or o is None or isinstance(o, (int, str)):
            return json.dumps(o)
        if isinstance(o, float):
            if not math.isfinite(o):
                raise ValueError("cannot serialize non-finite floats")
            return format(o, ".17g")
        if isinstance(o, list):
            if not o:
                return "[]"
            if all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in o):
                return "[" + ", ".join(enc(t, level + 1) for t in o) + "]"
            return "[" + sep.join(pad + enc(t, level + 1) for t in o) + end + "]"
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = (pad + json.dumps(k) + ": " + enc(v, level + 1) for k, v in o.items())
            return "{" + sep.join(items) + end + "}"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0)


def set_to_dict(s):
    if isinstance(s, LinearSubspace):
        return {"type": "linear", "ambient_dim": s.ambient_dim, "basis": s.matrix.T.tolist()}
    if isinstance(s, AffineSubspace):
        return {
            "type": "affine",
            "ambient_dim": s.ambient_dim,
            "basis": s.matrix.T.tolist(),
            "offset": s.offset.tolist(),
        }
    if isinstance(s, Ball):
        return {"type": "ball", "center": s.center.tolist(), "radius": s.radius}
    if isinstance(s, Sphere):
        return {"type": "sphere", "center": s.center.tolist(), "radius": s.radius}
    raise TypeError(f"cannot serialize {s!r}")


def set_from_dict(d):
    kind = d["type"]
    if kind in ("linear", "affine"):
        n = int(d["ambient_dim"])
        cols = np.array(d["basis"], dtype=float).reshape(-1, n).T
        basis = OrthonormalBasis(n, cols)
        if kind == "linear":
            return LinearSubspace(basis)
        return AffineSubspace(basis, d["offset"])
    if kind == "ball":
        return Ball(d["center"], d["radius"])
    if kind == "sphere":
        return Sphere(d["center"], d["radius"])
    raise InvalidConfigError(f"unknown set type {kind!r}")


# ---------------------------------------------------------------------------
# random and canonical pairs


def _affine_pair(u, v, rng, scale=1.0):
    """Translate ``u, v`` to pass through a common random point."""
    n = u.ambient_dim
    p = scale * rng.standard_normal(n)
    a = p + u.matrix @ rng.standard_normal(u.dim)
    b = p + v.matrix @ rng.standard_normal(v.dim)
    return AffineSubspace(u.basis, a), AffineSubspace(v.basis, b)


def random_pair(n, dim_u, dim_v, dim_int, seed, affine=False):
    """Random subspaces of ``R^n`` whose intersection has dimension ``dim_int``.

    ``dim_int`` shared Gaussian directions are completed by independent
    Gaussian columns for each subspace, then everything is orthonormalized.
    With ``affine=True`` both subspaces are translated through a random
    common point.
    """
    n, dim_u, dim_v, dim_int = int(n), int(dim_u), int(dim_v), int(dim_int)
    if not (1 <= dim_int <= min(dim_u, dim_v)):
        raise InvalidConfigError("need 1 <= dim_int <= min(dim_u, dim_v)")
    if dim_u + dim_v - dim_int > n:
        raise InvalidConfigError("need dim_u + dim_v - dim_int <= n")
    rng = make_rng(seed)
    for _ in range(GENERATION_RETRIES):
        shared = rng.standard_normal((n, dim_int))
        u = LinearSubspace(orthonormalize(
            np.hstack([shared, rng.standard_normal((n, dim_u - dim_int))]), n))
        v = LinearSubspace(orthonormalize(
            np.hstack([shared, rng.standard_normal((n, dim_v - dim_int))]), n))
        if u.dim != dim_u or v.dim != dim_v:
            continue
        angle = friedrichs_cosine(u, v, check=False)
        if angle.intersection_dim != dim_int:
            continue
        meta = {
            "name": "random_affine_pair" if affine else "random_pair",
            "seed": seed,
            "dims": [dim_u, dim_v, dim_int],
            "friedrichs_cosine": angle.cosine,
        }
        sets = list(_affine_pair(u, v, rng)) if affine else [u, v]
        return ProblemInstance(sets, InstanceKind.AFFINE_PAIR, None, meta)
    raise GenerationError(
        f"could not realize intersection dimension {dim_int} after {GENERATION_RETRIES} draws"
    )


def random_orthogonal(n, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign-fixed)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def canonical_pair(n, principal_angles, dim_int, seed=0, rotate=True, affine=False):
    """Pair of subspaces with prescribed principal angles.

    ``U`` is spanned by ``e_1..e_d`` (``d = dim_int``) and ``e_{d+2i-1}``;
    ``V`` shares the first block and contains ``cos t_i e_{d+2i-1} +
    sin t_i e_{d+2i}`` for each angle ``t_i``.  A seeded random orthogonal
    change of basis is applied unless ``rotate`` is false.
    """
    angles = [float(t) for t in principal_angles]
    n, dim_int = int(n), int(dim_int)
    if dim_int < 0 or dim_int + 2 * len(angles) > n:
        raise InvalidConfigError("need dim_int + 2 * len(angles) <= n")
    if not all(0.0 < t <= math.pi / 2 for t in angles):
        raise InvalidConfigError("principal angles must lie in (0, pi/2]")
    if not angles and dim_int == 0:
        raise InvalidConfigError("empty configuration")
    eye = np.eye(n)
    ucols = [eye[:, j] for j in range(dim_int)]
    vcols = list(ucols)
    for i, t in enumerate(angles):
        a, b = dim_int + 2 * i, dim_int + 2 * i + 1
        ucols.append(eye[:, a])
        vcols.append(math.cos(t) * eye[:, a] + math.sin(t) * eye[:, b])
    rng = make_rng(seed)
    um = np.column_stack(ucols) if ucols else np.zeros((n, 0))
    vm = np.column_stack(vcols)
    if rotate:
        q = random_orthogonal(n, rng)
        um, vm = q @ um, q @ vm
    u = LinearSubspace(orthonormalize(um, n))
    v = LinearSubspace(orthonormalize(vm, n))
    cosine = math.cos(min(angles)) if angles else 0.0
    if cosine < 1e-15:
        cosine = 0.0
    meta = {
        "name": "canonical_affine_pair" if affine else "canonical_pair",
        "seed": seed,
        "dims": [u.dim, v.dim, dim_int],
        "principal_angles": angles,
        "friedrichs_cosine": cosine,
    }
    sets = list(_affine_pair(u, v, rng)) if affine else [u, v]
    return ProblemInstance(sets, InstanceKind.AFFINE_PAIR, None, meta)


def random_bench_pair(n, seed):
    """Benchmark draw: ``dim_u, dim_v ~ U[n/8, n/2]``, ``dim_int ~ U[1, min/4]``."""
    rng = make_rng(seed)
    lo, hi = max(1, n // 8), max(1, n // 2)
    du = int(rng.integers(lo, hi, endpoint=True))
    dv = int(rng.integers(lo, hi, endpoint=True))
    di = int(rng.integers(1, max(1, min(du, dv) // 4), endpoint=True))
    return random_pair(n, du, dv, di, seed)


# ---------------------------------------------------------------------------
# gallery


def _line(point, direction):
    d = np.asarray(direction, dtype=float)
    return AffineSubspace(orthonormalize([d], d.shape[0]), point)


def _lines_through_origin(degrees):
    return [
        LinearSubspace.span([[math.cos(math.radians(a)), math.sin(math.radians(a))]])
        for a in degrees
    ]


GALLERY_DEFAULTS = {
    "two_balls": {"center_a": [0.0, 0.0], "radius_a": 2.0, "center_b": [3.0, 0.0],
                  "radius_b": 2.0, "x0": [1.5, 3.0]},
    "ball_line_tangent": {"center": [0.0, 1.0], "radius": 1.0, "height": 0.0,
                          "x0": [2.0, 3.0]},
    "ball_line_crossing": {"center": [0.0, 0.0], "radius": 1.0, "height": 0.5,
                           "x0": [3.0, 2.0]},
    "circle_line": {"center": [0.0, 0.0], "radius": 1.0, "height": 0.5,
                    "x0": [2.0, 1.5]},
    "three_lines": {"angles_deg": [0.0, 60.0, 120.0], "x0": [1.0, 2.0]},
    "two_lines_3d": {"angle": math.pi / 3, "x0": [1.0, 2.0, 0.0]},
}


def gallery_names():
    return sorted(GALLERY_DEFAULTS)


def gallery(name, params=None):
    """Small named instances with fixed, documented default coordinates.

    The coordinates are choices of this package (``metadata['artifact_defined']``).
    ``params`` overrides any default, including the default start ``x0``.
    """
    if name not in GALLERY_DEFAULTS:
        raise InvalidConfigError(f"unknown gallery instance {name!r}; known: {gallery_names()}")
    p = dict(GALLERY_DEFAULTS[name])
    unknown = set(params or {}) - set(p)
    if unknown:
        raise InvalidConfigError(f"unknown parameters for {name}: {sorted(unknown)}")
    p.update(params or {})
    meta = {"name": name, "seed": None, "artifact_defined": True, "params": p,
            "x0": list(p["x0"])}
    ref = None

    if name == "two_balls":
        sets = [Ball(p["center_a"], p["radius_a"]), Ball(p["center_b"], p["radius_b"])]
        gap = np.linalg.norm(np.subtract(p["center_a"], p["center_b"]))
        if gap > p["radius_a"] + p["radius_b"]:
            raise InvalidConfigError("the two balls do not intersect")
        return ProblemInstance(sets, InstanceKind.NONAFFINE, None, meta)

    if name in ("ball_line_tangent", "ball_line_crossing"):
        c = np.asarray(p["center"], dtype=float)
        if name == "ball_line_tangent":
            # the line is tangent to the ball from below
            p["height"] = float(c[1] - p["radius"])
            meta["params"] = p
            ref = np.array([c[0], p["height"]])
        sets = [Ball(c, p["radius"]), _line([0.0, p["height"]], [1.0, 0.0])]
        return ProblemInstance(sets, InstanceKind.NONAFFINE, ref, meta)

    if name == "circle_line":
        sets = [Sphere(p["center"], p["radius"]), _line([0.0, p["height"]], [1.0, 0.0])]
        return ProblemInstance(sets, InstanceKind.NONAFFINE, None, meta)

    if name == "three_lines":
        sets = _lines_through_origin(p["angles_deg"])
        meta["reference"] = "origin"
        return ProblemInstance(sets, InstanceKind.AFFINE_MULTI, np.zeros(2), meta)

    # two_lines_3d
    t = float(p["angle"])
    u = LinearSubspace.span([[1.0, 0.0, 0.0]])
    v = LinearSubspace.span([[math.cos(t), math.sin(t), 0.0]])
    meta["friedrichs_cosine"] = friedrichs_cosine(u, v).cosine
    return ProblemInstance([u, v], InstanceKind.AFFINE_PAIR, np.zeros(3), meta)
