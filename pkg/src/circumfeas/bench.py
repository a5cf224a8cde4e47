"""Benchmark runner, Dolan-More performance profiles and record files.

A benchmark draws ``count`` instances (instance ``i`` from seed ``seed + i``)
and ``starts_per_instance`` Gaussian start points per instance.  The starts
of instance ``i`` come from ``PCG64([seed + i, 1])``.  Every configured
method runs from the same start; the prestep is applied inside each run.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import CircumfeasError, InvalidConfigError, InvalidInputError
from .instances import canonical_pair, dumps, random_bench_pair, random_pair
from .methods import (
    MAX_ITER,
    CriterionKind,
    MethodKind,
    Prestep,
    StopCriterion,
    StopReason,
    solve,
)

THREADS_ENV = "CIRCUMFEAS_THREADS"
CSV_FIELDS = (
    "instance_id", "start_id", "method", "prestep", "n", "dim_u", "dim_v", "dim_int",
    "c_f", "criterion", "tol", "iterations", "final_true_error", "final_gap",
    "stop_reason", "wall_time_us",
)
# stop_reason for runs that raised instead of terminating normally
ERROR_REASON = "error"


@dataclass(frozen=True)
class MethodSpec:
    method: MethodKind
    prestep: Prestep = Prestep.PROJECT_V

    @classmethod
    def parse(cls, text, default_prestep=Prestep.PROJECT_V):
        """``"cdrm"`` or ``"cdrm:u"`` (method, optional prestep)."""
        if isinstance(text, cls):
            return text
        name, _, pre = str(text).partition(":")
        return cls(MethodKind.parse(name), Prestep.parse(pre) if pre else Prestep.parse(default_prestep))


@dataclass
class ExperimentConfig:
    """Benchmark description.

    ``generator`` is ``"random"`` (dimensions drawn per instance unless
    ``dims`` is given as ``(dim_u, dim_v, dim_int)``) or ``"canonical"``
    (fixed ``angles`` and ``dim_int``, seeded rotation).
    """

    n: int = 200
    count: int = 100
    starts_per_instance: int = 20
    methods: list = field(default_factory=lambda: ["map", "drm", "cdrm"])
    criterion: StopCriterion = field(
        default_factory=lambda: StopCriterion(CriterionKind.GAP_DISTANCE, 1e-6))
    max_iter: int = MAX_ITER
    seed: int = 0
    generator: str = "random"
    dims: tuple | None = None
    angles: tuple = (0.005,)
    dim_int: int = 1
    start_scale: float = 1.0
    workers: int | None = None
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        self.methods = [MethodSpec.parse(m) for m in self.methods]
        if self.count < 1:
            raise InvalidConfigError("count must be at least 1")
        if self.starts_per_instance < 1:
            raise InvalidConfigError("starts_per_instance must be at least 1")
        if not self.methods:
            raise InvalidConfigError("no methods configured")
        if self.generator not in ("random", "canonical"):
            raise InvalidConfigError(f"unknown generator {self.generator!r}")
        if self.max_iter < 0:
            raise InvalidConfigError("max_iter must be non-negative")
        if any(m.method is MethodKind.CDRM_MULTISET for m in self.methods):
            raise InvalidConfigError("benchmarks run two-set methods only")


@dataclass
class RunRecord:
    instance_id: int
    start_id: int
    method: str
    prestep: str
    n: int
    dim_u: int
    dim_v: int
    dim_int: int
    c_f: float
    criterion: str
    tol: float
    iterations: int
    final_true_error: float | None
    final_gap: float | None
    stop_reason: str
    wall_time_us: int

    @property
    def solved(self):
        return self.stop_reason == StopReason.CONVERGED.value

    @classmethod
    def from_mapping(cls, row):
        conv = {f.name: f.type for f in fields(cls)}
        out = {}
        for name in CSV_FIELDS:
            value = row.get(name)
            if value in ("", None):
                out[name] = None
            elif conv[name] in ("int",):
                out[name] = int(float(value))
            elif conv[name].startswith("float"):
                out[name] = float(value)
            else:
                out[name] = str(value)
        return cls(**out)


def make_instance(config, index):
    seed = config.seed + index
    if config.generator == "canonical":
        return canonical_pair(config.n, config.angles, config.dim_int, seed=seed)
    if config.dims is not None:
        du, dv, di = config.dims
        return random_pair(config.n, du, dv, di, seed)
    return random_bench_pair(config.n, seed)


def start_points(config, index):
    rng = np.random.Generator(np.random.PCG64([config.seed + index, 1]))
    return config.start_scale * rng.standard_normal((config.starts_per_instance, config.n))


def _run_instance(config, index):
    inst = make_instance(config, index)
    inter = inst.intersection()
    du, dv, di = inst.metadata["dims"]
    records = []
    for j, x in enumerate(start_points(config, index)):
        reference = inter.project(x)
        for spec in config.methods:
            t0 = time.perf_counter()
            try:
                res = solve(spec.method, inst.sets, x, config.criterion, config.max_iter,
                            spec.prestep, reference=reference, keep_iterates=False)
                last = res.final_record
                iters, reason = res.iterations, res.stop_reason.value
                err, gap = last.true_error, last.gap
            except CircumfeasError:
                iters, reason, err, gap = 0, ERROR_REASON, None, None
            wall = int(round((time.perf_counter() - t0) * 1e6))
            records.append(RunRecord(
                index, j, spec.method.value, spec.prestep.value, config.n, du, dv, di,
                float(inst.friedrichs_cosine), config.criterion.kind.value,
                float(config.criterion.tolerance), iters, err, gap, reason, wall,
            ))
    return records


def worker_count(config):
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            w = int(env)
        except ValueError:
            raise InvalidConfigError(f"{THREADS_ENV} must be an integer") from None
    elif config.workers:
        w = config.workers
    else:
        w = os.cpu_count() or 1
    return max(1, min(w, config.count))


def run_experiment(config):
    """Run every (instance, start, method) triple; one record each.

    Records are sorted by ``(instance_id, start_id, method)`` whatever the
    completion order.  Instances are distributed over a process pool whose
    size comes from ``CIRCUMFEAS_THREADS`` (or ``config.workers``).
    """
    if not isinstance(config, ExperimentConfig):
        raise InvalidConfigError("run_experiment expects an ExperimentConfig")
    workers = worker_count(config)
    if workers == 1:
        chunks = [_run_instance(config, i) for i in range(config.count)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_instance, [config] * config.count, range(config.count)))
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.instance_id, r.start_id, r.method, r.prestep))
    if config.out:
        write_records(records, config.out, config.format)
    return records


# ---------------------------------------------------------------------------
# record files


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _infer_format(path, fmt):
    if fmt:
        fmt = fmt.lower()
    else:
        fmt = "json" if str(path).lower().endswith(".json") else "csv"
    if fmt not in ("csv", "json"):
        raise InvalidConfigError(f"unknown format {fmt!r}")
    return fmt


def write_records(records, path, fmt=None):
    fmt = _infer_format(path, fmt)
    rows = [asdict(r) for r in records]
    with open(path, "w", newline="") as fh:
        if fmt == "json":
            fh.write(dumps(rows, indent=1))
            fh.write("\n")
            return
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in CSV_FIELDS])


def read_records(path, fmt=None):
    fmt = _infer_format(path, fmt)
    with open(path, newline="") as fh:
        if fmt == "json":
            rows = json.load(fh)
        else:
            rows = list(csv.DictReader(fh))
    missing = [k for k in CSV_FIELDS if rows and k not in rows[0]]
    if missing:
        raise InvalidInputError(f"record file lacks columns {missing}")
    return [RunRecord.from_mapping(r) for r in rows]


# ---------------------------------------------------------------------------
# performance profiles


@dataclass
class PerformanceProfile:
    """Dolan-More profile: ``rho[label][i]`` is the fraction of problems a
    solver handles within a factor ``taus[i]`` of the best solver."""

    labels: list
    taus: np.ndarray
    rho: dict
    ratio_cap: float
    solve_fraction: dict
    problems: int

    def breakpoints(self, label):
        return list(zip(self.taus.tolist(), self.rho[label].tolist()))

    def value(self, label, tau):
        """``rho_label(tau)`` (right-continuous step function)."""
        i = np.searchsorted(self.taus, tau, side="right") - 1
        return 0.0 if i < 0 else float(self.rho[label][i])

    def to_dict(self):
        return {
            "ratio_cap": self.ratio_cap,
            "problems": self.problems,
            "methods": {
                lab: {"solve_fraction": self.solve_fraction[lab],
                      "breakpoints": [list(b) for b in self.breakpoints(lab)]}
                for lab in self.labels
            },
        }


def _get(rec, name):
    return rec[name] if isinstance(rec, dict) else getattr(rec, name)


def _labels(records):
    presteps = {}
    for r in records:
        presteps.setdefault(_get(r, "method"), set()).add(_get(r, "prestep"))

    def label(r):
        m = _get(r, "method")
        return m if len(presteps[m]) == 1 else f"{m}:{_get(r, 'prestep')}"

    return label


def performance_profile(records, cost_field="iterations"):
    """Performance profile over problems ``(instance_id, start_id)``.

    The cost ratio of a solver on a problem is its cost over the best cost
    among solvers that converged (costs below 1 count as 1).  Unsolved runs
    get the cap ``r_M = 2 * max finite ratio`` (10 if every finite ratio is
    1) and never count towards ``rho``.
    """
    records = list(records)
    if not records:
        raise InvalidInputError("no records to profile")
    label = _labels(records)
    labels = sorted({label(r) for r in records})
    problems = {}
    for r in records:
        key = (_get(r, "instance_id"), _get(r, "start_id"))
        solved = _get(r, "stop_reason") == StopReason.CONVERGED.value
        cost = _get(r, cost_field)
        problems.setdefault(key, {})[label(r)] = (max(float(cost), 1.0), solved) if solved else (
            math.inf, False)

    ratios = {lab: [] for lab in labels}
    for costs in problems.values():
        finite = [c for c, ok in costs.values() if ok]
        best = min(finite) if finite else math.inf
        for lab in labels:
            c, ok = costs.get(lab, (math.inf, False))
            ratios[lab].append(c / best if ok else math.inf)

    finite_all = [t for lab in labels for t in ratios[lab] if math.isfinite(t)]
    top = max(finite_all) if finite_all else 1.0
    cap = 10.0 if top <= 1.0 else 2.0 * top
    taus = np.unique(np.array(finite_all + [1.0, cap]))
    count = len(problems)
    rho, frac = {}, {}
    for lab in labels:
        arr = np.sort(np.array(ratios[lab]))
        rho[lab] = np.searchsorted(arr, taus, side="right") / count
        frac[lab] = float(np.isfinite(arr).sum() / count)
    return PerformanceProfile(labels, taus, rho, cap, frac, count)


def write_profile(profile, path, fmt=None):
    fmt = _infer_format(path, fmt)
    with open(path, "w", newline="") as fh:
        if fmt == "json":
            fh.write(dumps(profile.to_dict(), indent=1))
            fh.write("\n")
            return
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tau"] + profile.labels)
        for i, tau in enumerate(profile.taus):
            writer.writerow([_fmt(float(tau))] + [_fmt(float(profile.rho[lab][i]))
                                                  for lab in profile.labels])


def dominates(profile, a, b):
    """True when ``rho_a >= rho_b`` at every breakpoint."""
    return bool(np.all(profile.rho[a] >= profile.rho[b]))
