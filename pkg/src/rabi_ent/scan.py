"""Parameter-space exploration.

Exhaustive grid scans and a derivative-free simplex refinement, both
minimizing the worst-case transition probability max_t T(t) over a fixed
time window.  Everything here is deterministic: no randomness, fixed
evaluation order, and box bounds enforced by clamping plus a penalty.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError
from .params import KappaConvention, ModelParams
from .specialfn import DEFAULT_TAIL_TOL
from .dynamics import transition_prob

SWEEPABLE = ("beta", "alpha_sq", "kappa0", "ratio_r")

_NM_REFLECT = 1.0
_NM_EXPAND = 2.0
_NM_CONTRACT = 0.5
_NM_SHRINK = 0.5
_PENALTY_SCALE = 1.0


@dataclass(frozen=True)
class AxisRange:
    """Inclusive sweep range with at least two steps."""

    min: float
    max: float
    steps: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise DomainError("axis range endpoints must be finite")
        if self.max < self.min:
            raise DomainError(f"axis range has max {self.max} < min {self.min}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))

    def grid(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class ScanSpec:
    """A grid scan request: swept ranges, fixed values, and the objective window."""

    ranges: Mapping[str, AxisRange]
    fixed: Mapping[str, float]
    horizon: float
    time_points: int = 2000
    kappa_convention: KappaConvention = KappaConvention.OMEGA0_SCALED
    tail_tol: float = DEFAULT_TAIL_TOL
    grid_ceiling: int = 20000

    def __post_init__(self) -> None:
        ranges = dict(self.ranges)
        fixed = dict(self.fixed)
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "fixed", fixed)
        for name in ranges:
            if name not in SWEEPABLE:
                raise DomainError(f"cannot sweep unknown parameter {name!r}")
        for name in fixed:
            if name not in SWEEPABLE:
                raise DomainError(f"cannot fix unknown parameter {name!r}")
        missing = [n for n in SWEEPABLE if n not in ranges and n not in fixed]
        if missing:
            raise DomainError(f"parameters neither swept nor fixed: {missing}")
        doubled = sorted(set(ranges) & set(fixed))
        if doubled:
            raise DomainError(f"parameters both swept and fixed: {doubled}")
        if not (math.isfinite(self.horizon) and self.horizon > 0.0):
            raise DomainError(f"horizon must be > 0, got {self.horizon}")
        if int(self.time_points) != self.time_points or self.time_points < 2:
            raise DomainError(f"time_points must be an integer >= 2, got {self.time_points}")
        object.__setattr__(self, "time_points", int(self.time_points))

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(n for n in SWEEPABLE if n in self.ranges)


@dataclass(frozen=True)
class ScanResult:
    """Grid evaluations, the best point found, and the refinement trace."""

    axis_names: tuple[str, ...]
    points: np.ndarray
    objectives: np.ndarray
    best_point: dict[str, float]
    best_objective: float
    trace: tuple[tuple[dict[str, float], float], ...] = ()
    metadata: dict = field(default_factory=dict)


def objective(
    params: ModelParams,
    horizon: float,
    time_points: int = 2000,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> float:
    """Worst-case transition probability over a uniform grid on [0, horizon]."""
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise DomainError(f"horizon must be > 0, got {horizon}")
    if time_points < 2:
        raise DomainError(f"time_points must be >= 2, got {time_points}")
    times = np.linspace(0.0, horizon, int(time_points))
    series = transition_prob(params, times, tail_tol)
    return float(series.channels["T"].max())


def _params_at(point: Mapping[str, float], spec: ScanSpec) -> ModelParams:
    values = dict(spec.fixed)
    values.update(point)
    return ModelParams(
        ratio_r=values["ratio_r"],
        beta=values["beta"],
        kappa0=values["kappa0"],
        alpha_sq=values["alpha_sq"],
        kappa_convention=spec.kappa_convention,
    )


def grid_scan(spec: ScanSpec) -> ScanResult:
    """Exhaustively evaluate the objective over the requested grid.

    Evaluation order is row-major over the canonical axis order; the result
    does not depend on that order.
    """
    axes = spec.axis_names
    grids = [spec.ranges[name].grid() for name in axes]
    total = int(np.prod([g.size for g in grids])) if grids else 1
    if total > spec.grid_ceiling:
        raise CapacityError(f"grid has {total} points, exceeding ceiling {spec.grid_ceiling}")
    points = np.array(list(itertools.product(*grids))) if grids else np.zeros((1, 0))
    objectives = np.empty(points.shape[0])
    for i, row in enumerate(points):
        point = {name: float(v) for name, v in zip(axes, row)}
        objectives[i] = objective(
            _params_at(point, spec), spec.horizon, spec.time_points, spec.tail_tol
        )
    best_idx = int(np.argmin(objectives))
    best_point = {name: float(v) for name, v in zip(axes, points[best_idx])}
    best = float(objectives[best_idx])
    return ScanResult(
        axis_names=axes,
        points=points,
        objectives=objectives,
        best_point=best_point,
        best_objective=best,
        metadata={"grid_size": total},
    )


def refine(
    start_point: Mapping[str, float],
    step_scales: Mapping[str, float],
    max_iters: int = 200,
    ftol: float = 1e-8,
    *,
    bounds: Mapping[str, tuple[float, float]] | None = None,
    spec: ScanSpec | None = None,
    objective_fn: Callable[[dict[str, float]], float] | None = None,
) -> ScanResult:
    """Simplex descent from a start point; never reports worse than it started.

    The default objective comes from ``spec`` (its fixed values, window, and
    convention); ``objective_fn`` is a seam for injecting a synthetic
    objective in tests.  Points outside ``bounds`` are clamped before
    evaluation and penalized by their clamping distance, so reported points
    always satisfy the bounds.
    """
    if not start_point:
        raise DomainError("start_point must name at least one parameter")
    names = tuple(n for n in SWEEPABLE if n in start_point)
    if not names:
        names = tuple(sorted(start_point))
    if set(names) != set(start_point):
        raise DomainError("start_point keys must be sweepable parameter names")
    if set(step_scales) != set(names):
        raise DomainError("step_scales must cover exactly the start_point keys")
    if objective_fn is None:
        if spec is None:
            raise DomainError("refine needs either a ScanSpec or an objective_fn")
        if any(n not in SWEEPABLE for n in names):
            raise DomainError("start_point keys must be sweepable parameter names")

        def objective_fn(point: dict[str, float]) -> float:
            return objective(
                _params_at(point, spec), spec.horizon, spec.time_points, spec.tail_tol
            )

    lo = np.array([bounds[n][0] if bounds and n in bounds else -np.inf for n in names])
    hi = np.array([bounds[n][1] if bounds and n in bounds else np.inf for n in names])
    x0 = np.array([float(start_point[n]) for n in names])
    if np.any(x0 < lo) or np.any(x0 > hi):
        raise DomainError("start_point lies outside the box bounds")

    def evaluate(x: np.ndarray) -> tuple[float, float, np.ndarray]:
        clamped = np.clip(x, lo, hi)
        base = float(objective_fn({n: float(v) for n, v in zip(names, clamped)}))
        penalty = _PENALTY_SCALE * float(np.linalg.norm(x - clamped))
        return base + penalty, base, clamped

    trace: list[tuple[dict[str, float], float]] = []
    best_base = math.inf

    def record(base: float, clamped: np.ndarray) -> None:
        nonlocal best_base
        if base < best_base:
            best_base = base
            trace.append(({n: float(v) for n, v in zip(names, clamped)}, base))

    dim = len(names)
    simplex = [x0]
    for i in range(dim):
        step = float(step_scales[names[i]])
        vertex = x0.copy()
        if vertex[i] + step <= hi[i]:
            vertex[i] += step
        else:
            vertex[i] -= step
        simplex.append(vertex)
    values = []
    for vertex in simplex:
        f, base, clamped = evaluate(vertex)
        record(base, clamped)
        values.append(f)
    values = np.array(values)

    iterations = 0
    converged = False
    for iterations in range(1, max_iters + 1):
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = values[order]
        spread = abs(values[-1] - values[0])
        if spread <= ftol * (abs(values[0]) + abs(values[-1]) + 1e-30):
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]

        reflected = centroid + _NM_REFLECT * (centroid - worst)
        f_r, base_r, cl_r = evaluate(reflected)
        record(base_r, cl_r)
        if values[0] <= f_r < values[-2]:
            simplex[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[0]:
            expanded = centroid + _NM_EXPAND * (centroid - worst)
            f_e, base_e, cl_e = evaluate(expanded)
            record(base_e, cl_e)
            if f_e < f_r:
                simplex[-1], values[-1] = expanded, f_e
            else:
                simplex[-1], values[-1] = reflected, f_r
            continue
        contracted = centroid + _NM_CONTRACT * (worst - centroid)
        f_c, base_c, cl_c = evaluate(contracted)
        record(base_c, cl_c)
        if f_c < values[-1]:
            simplex[-1], values[-1] = contracted, f_c
            continue
        best_vertex = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = best_vertex + _NM_SHRINK * (simplex[i] - best_vertex)
            f_s, base_s, cl_s = evaluate(simplex[i])
            record(base_s, cl_s)
            values[i] = f_s

    best_point, best = trace[-1]
    return ScanResult(
        axis_names=names,
        points=np.zeros((0, dim)),
        objectives=np.zeros(0),
        best_point=dict(best_point),
        best_objective=best,
        trace=tuple((dict(p), v) for p, v in trace),
        metadata={"iterations": iterations, "converged": converged},
    )
