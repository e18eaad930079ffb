"""Empirical statistics of the normalized catch data and moment-matching
parameter identification.

The objective is the sum of squared relative errors of the stationary mean
and standard deviation against the empirical targets. "Trial and error" is
made reproducible as a deterministic multi-level coordinate grid search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DynamicConfig, TerminationKind, run_to_stationary
from .measures import Grid, mean_and_std, uniform
from .utility import CompetitionParams, CompetitionUtility

__all__ = [
    "EmpiricalSample",
    "FitSpec",
    "FitResult",
    "NonStationaryError",
    "empirical_stats",
    "empirical_pdf",
    "fit_objective",
    "fit_search",
    "FREE_PARAM_ORDER",
]

FREE_PARAM_ORDER = ("a", "b", "eta", "kappa")


class NonStationaryError(RuntimeError):
    """The dynamic did not reach the stationarity threshold within the
    allotted number of steps."""


@dataclass(frozen=True)
class EmpiricalSample:
    """Per-year-max normalized efforts, pooled across years."""

    values: np.ndarray
    per_year_max: dict

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("normalized values must lie in [0, 1]")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def empirical_stats(sample: EmpiricalSample) -> tuple[float, float]:
    """Population mean and standard deviation of the pooled values."""
    if sample.values.size == 0:
        raise ValueError("empirical_stats: empty sample")
    return float(sample.values.mean()), float(sample.values.std())


def empirical_pdf(sample: EmpiricalSample, bins: int = 20) -> np.ndarray:
    """Histogram density over uniform bins of [0, 1] (count/total/binwidth);
    the right edge 1.0 falls into the last bin."""
    if bins < 2:
        raise ValueError("empirical_pdf: bins must be >= 2")
    if sample.values.size == 0:
        raise ValueError("empirical_pdf: empty sample")
    idx = np.minimum((sample.values * bins).astype(int), bins - 1)
    counts = np.bincount(idx, minlength=bins).astype(float)
    return counts / sample.values.size * bins


@dataclass(frozen=True)
class FitSpec:
    """Search space: free parameters among {a, b, eta, kappa} with bounds,
    everything else pinned by `fixed_params` and `base_config`."""

    free: tuple
    bounds: dict
    fixed_params: CompetitionParams = CompetitionParams()
    fixed_eta: float | None = 0.01
    fixed_kappa: float = 1.0
    levels: int = 2
    points_per_dim: int = 5
    shrink: float = 0.5
    max_steps: int = 1_000_000

    def __post_init__(self):
        unknown = set(self.free) - set(FREE_PARAM_ORDER)
        if unknown:
            raise ValueError(f"unknown free parameters: {sorted(unknown)}")
        for name in self.free:
            lo, hi = self.bounds[name]
            if not lo < hi:
                raise ValueError(f"bounds for {name} must have positive length")
            if name == "kappa" and not (0.0 <= lo and hi <= 1.0):
                raise ValueError("kappa bounds must lie within [0, 1]")
            if name == "eta" and lo <= 0.0:
                raise ValueError("eta bounds must be positive")
        if self.levels < 0 or self.points_per_dim < 2 or not 0.0 < self.shrink < 1.0:
            raise ValueError("invalid search schedule")


def _build_point(spec: FitSpec, assignment: dict) -> tuple[CompetitionParams, float, float]:
    params = CompetitionParams(
        a=assignment.get("a", spec.fixed_params.a),
        b=assignment.get("b", spec.fixed_params.b),
        c=spec.fixed_params.c,
        d=spec.fixed_params.d,
        alpha=spec.fixed_params.alpha,
        epsilon=spec.fixed_params.epsilon,
    )
    eta = assignment.get("eta", spec.fixed_eta)
    kappa = assignment.get("kappa", spec.fixed_kappa)
    return params, eta, kappa


def fit_objective(params: CompetitionParams, config: DynamicConfig,
                  target: tuple[float, float], max_steps: int = 1_000_000) -> float:
    """((m - m_hat)/m_hat)^2 + ((s - s_hat)/s_hat)^2 where (m, s) are the
    stationary moments from the uniform initial condition."""
    model = CompetitionUtility(config.grid, params)
    traj = run_to_stationary(config, model, uniform(config.grid), max_steps)
    if traj.termination.kind is not TerminationKind.STATIONARY:
        raise NonStationaryError(f"no stationary state within {max_steps} steps")
    mean, std = mean_and_std(traj.final_measure)
    m_hat, s_hat = target
    return ((mean - m_hat) / m_hat) ** 2 + ((std - s_hat) / s_hat) ** 2


@dataclass(frozen=True)
class FitResult:
    best: dict
    objective: float
    evaluations: tuple
    target: tuple[float, float]
    model_moments: tuple[float, float]

    @property
    def evaluation_count(self) -> int:
        return len(self.evaluations)


def fit_search(spec: FitSpec, target: tuple[float, float], grid: Grid,
               dt: float = 0.001, delta: float = 1e-11) -> FitResult:
    """Deterministic multi-level grid search over the free parameters.

    Each level evaluates the Cartesian product of points_per_dim values per
    free parameter, then shrinks the bounds around the best point by the
    shrink factor (clipped to the original bounds). Ties break toward the
    smaller parameter vector in the order (a, b, eta, kappa), which the
    lexicographic enumeration order guarantees with a strict improvement
    test.
    """
    free = tuple(p for p in FREE_PARAM_ORDER if p in spec.free)
    bounds = {p: tuple(map(float, spec.bounds[p])) for p in free}
    original = dict(bounds)

    best_assignment: dict = {}
    best_obj = np.inf
    best_moments = (np.nan, np.nan)
    evaluations = []
    failures = 0

    for _level in range(spec.levels + 1):
        axes = [np.linspace(bounds[p][0], bounds[p][1], spec.points_per_dim) for p in free]
        for combo in itertools.product(*axes) if free else [()]:
            assignment = dict(zip(free, map(float, combo)))
            params, eta, kappa = _build_point(spec, assignment)
            try:
                config = DynamicConfig(kappa, eta, grid, dt, delta)
                model = CompetitionUtility(grid, params)
                traj = run_to_stationary(config, model, uniform(grid), spec.max_steps)
                if traj.termination.kind is not TerminationKind.STATIONARY:
                    raise NonStationaryError(f"no stationary state within {spec.max_steps} steps")
                mean, std = mean_and_std(traj.final_measure)
                obj = ((mean - target[0]) / target[0]) ** 2 + ((std - target[1]) / target[1]) ** 2
            except (NonStationaryError, RuntimeError, ValueError) as exc:
                failures += 1
                evaluations.append((assignment, None, repr(exc)))
                continue
            evaluations.append((assignment, obj, None))
            if obj < best_obj:
                best_obj = obj
                best_assignment = assignment
                best_moments = (mean, std)
        if not np.isfinite(best_obj):
            raise RuntimeError("fit_search: every evaluation failed")
        # shrink around the current best, staying inside the original box
        new_bounds = {}
        for p in free:
            lo0, hi0 = original[p]
            half = (bounds[p][1] - bounds[p][0]) * spec.shrink / 2.0
            center = best_assignment[p]
            new_bounds[p] = (max(lo0, center - half), min(hi0, center + half))
        bounds = new_bounds

    best = dict(best_assignment)
    params, eta, kappa = _build_point(spec, best_assignment)
    best.setdefault("a", params.a)
    best.setdefault("b", params.b)
    best.setdefault("eta", eta)
    best.setdefault("kappa", kappa)
    return FitResult(best, float(best_obj), tuple(evaluations), tuple(target), best_moments)
