"""The heavy-tailed logit dynamic on the discretized simplex.

Semi-discrete evolution d mass_i / dt = weights_i(U(mu)) - mass_i, stepped
with fixed-step forward Euler. The softmax weights use the
kappa-exponential for positive noise eta, or the normalized positive-part
power max{U, 0}^(1/kappa) in the vanishing-noise limit. All weight
computations run in log space so no finite utility can overflow them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .kexp import log_e_kappa, validate_kappa
from .measures import Grid, GridMeasure, pdf_values

__all__ = [
    "LIMIT_NOISE",
    "DegenerateWeightsError",
    "DynamicConfig",
    "TerminationKind",
    "Termination",
    "Trajectory",
    "logit_weights",
    "limit_weights",
    "weights",
    "rhs",
    "euler_step",
    "run_until",
    "run_to_stationary",
    "eta_convergence_table",
]

# sentinel for the vanishing-noise limit equation (eta = 0)
LIMIT_NOISE = None


class DegenerateWeightsError(RuntimeError):
    """Every utility value is <= 0 under the limit equation, so the
    normalized positive-part weights are undefined."""

    def __init__(self, step: int | None = None):
        self.step = step
        where = "" if step is None else f" at step {step}"
        super().__init__(f"all utilities nonpositive under the vanishing-noise limit{where}")


@dataclass(frozen=True)
class DynamicConfig:
    """Dynamic parameters: shape kappa, noise eta (None = limit equation),
    Euler step dt, stationarity threshold delta, and the grid."""

    kappa: float
    eta: float | None
    grid: Grid
    dt: float = 0.001
    delta: float = 1e-11

    def __post_init__(self):
        validate_kappa(self.kappa)
        if self.eta is not None and self.eta <= 0.0:
            raise ValueError("eta must be positive (or None for the limit equation)")
        if self.eta is None and self.kappa == 0.0:
            raise ValueError("the vanishing-noise limit requires kappa > 0")
        if not 0.0 < self.dt <= 1.0:
            raise ValueError("dt must lie in (0, 1] to keep Euler steps on the simplex")
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")


class TerminationKind(enum.Enum):
    REACHED_FINAL_TIME = "reached_final_time"
    STATIONARY = "stationary"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    step: int | None = None


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped measure snapshots; the first is the initial condition."""

    snapshots: tuple
    termination: Termination

    def __post_init__(self):
        times = [t for t, _ in self.snapshots]
        if not times or times[0] != 0.0 or any(a >= b for a, b in zip(times, times[1:])):
            raise ValueError("snapshots must start at t=0 with strictly increasing times")

    @property
    def final_measure(self) -> GridMeasure:
        return self.snapshots[-1][1]


def _logit_weight_vector(kappa: float, eta: float, u: np.ndarray) -> np.ndarray:
    logw = log_e_kappa(kappa, u / eta)
    w = np.exp(logw - logw.max())
    return w / w.sum()


def _limit_weight_vector(kappa: float, u: np.ndarray) -> np.ndarray:
    pos = np.maximum(u, 0.0)
    if not np.any(pos > 0.0):
        raise DegenerateWeightsError()
    with np.errstate(divide="ignore"):
        logw = np.log(pos) / kappa
    w = np.exp(logw - logw.max())
    return w / w.sum()


def _weight_vector(config: DynamicConfig, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("utility vector must be finite")
    if config.eta is None:
        return _limit_weight_vector(config.kappa, u)
    return _logit_weight_vector(config.kappa, config.eta, u)


def logit_weights(config: DynamicConfig, u) -> GridMeasure:
    """Softmax weights e_kappa(U_i/eta) / sum_j e_kappa(U_j/eta).

    At kappa = 0 this is the classical exponential softmax. Computed in log
    space (shift by the max) so finite utilities can never overflow.
    """
    if config.eta is None:
        raise ValueError("logit_weights requires positive noise; use limit_weights")
    u = np.asarray(u, dtype=float)
    return GridMeasure(config.grid, _logit_weight_vector(config.kappa, config.eta, u))


def limit_weights(config: DynamicConfig, u) -> GridMeasure:
    """Vanishing-noise weights max{U_i, 0}^(1/kappa), normalized."""
    if config.kappa == 0.0:
        raise ValueError("limit weights are undefined at kappa = 0")
    u = np.asarray(u, dtype=float)
    return GridMeasure(config.grid, _limit_weight_vector(config.kappa, u))


def weights(config: DynamicConfig, u) -> GridMeasure:
    """Dispatch on the noise mode of the config."""
    return GridMeasure(config.grid, _weight_vector(config, np.asarray(u, dtype=float)))


def rhs(config: DynamicConfig, model, mu: GridMeasure) -> np.ndarray:
    """Right-hand side weights(U(mu)) - mu; components sum to 0."""
    return _weight_vector(config, model.values(mu)) - mu.mass


def euler_step(config: DynamicConfig, model, mu: GridMeasure) -> GridMeasure:
    """mu' = (1 - dt) mu + dt * weights(U(mu)): an exact convex combination,
    so the simplex is preserved whenever dt <= 1."""
    w = _weight_vector(config, model.values(mu))
    return GridMeasure(config.grid, (1.0 - config.dt) * mu.mass + config.dt * w)


def _snap_steps(record_times, dt: float, n_steps: int) -> dict[int, float]:
    """Map requested times to Euler step indices (nearest multiple of dt)."""
    snapped = {}
    for t in record_times:
        k = round(t / dt)
        if not 0 <= k <= n_steps:
            raise ValueError(f"record time {t} outside [0, t_final]")
        if abs(k * dt - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"record time {t} is not a multiple of dt={dt}")
        snapped[k] = float(t)
    return snapped


def run_until(config: DynamicConfig, model, init: GridMeasure, t_final: float,
              record_times) -> Trajectory:
    """Integrate to t_final with fixed-step Euler, recording at the
    requested times (snapped to the step lattice). The initial condition at
    t = 0 is always the first snapshot."""
    if t_final <= 0.0:
        raise ValueError("t_final must be positive")
    n_steps = round(t_final / config.dt)
    record = _snap_steps(record_times, config.dt, n_steps)
    snapshots = [(0.0, init)]
    mu = init
    for k in range(1, n_steps + 1):
        try:
            mu = euler_step(config, model, mu)
        except DegenerateWeightsError:
            raise DegenerateWeightsError(step=k - 1) from None
        if k in record:
            snapshots.append((record[k], mu))
    return Trajectory(tuple(snapshots), Termination(TerminationKind.REACHED_FINAL_TIME))


def run_to_stationary(config: DynamicConfig, model, init: GridMeasure,
                      max_steps: int) -> Trajectory:
    """Step until the per-step PDF change max_i N |mass'_i - mass_i| falls
    to the threshold delta; returns the post-step measure at the smallest
    such step k. Falls back to REACHED_FINAL_TIME after max_steps."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    n = config.grid.n_cells
    mu = init
    for k in range(max_steps):
        try:
            nxt = euler_step(config, model, mu)
        except DegenerateWeightsError:
            raise DegenerateWeightsError(step=k) from None
        if n * float(np.max(np.abs(nxt.mass - mu.mass))) <= config.delta:
            snaps = ((0.0, init), ((k + 1) * config.dt, nxt))
            return Trajectory(snaps, Termination(TerminationKind.STATIONARY, step=k))
        mu = nxt
    snaps = ((0.0, init), (max_steps * config.dt, mu))
    return Trajectory(snaps, Termination(TerminationKind.REACHED_FINAL_TIME, step=max_steps))


@dataclass(frozen=True)
class ConvergenceRow:
    eta: float
    time: float
    error: float
    rate: float | None = None


def eta_convergence_table(base: DynamicConfig, model, init: GridMeasure,
                          etas, times) -> list[ConvergenceRow]:
    """Max-norm PDF error of positive-noise runs against the limit run.

    One limit-equation reference per configuration, recorded at all
    requested times; each eta then runs the same Euler scheme. The observed
    order between consecutive etas, log(err_a/err_b)/log(eta_a/eta_b), is
    reported on the row of the smaller eta.
    """
    etas = [float(e) for e in etas]
    times = sorted(float(t) for t in times)
    if not etas or any(e <= 0.0 for e in etas):
        raise ValueError("etas must be positive")
    if any(a <= b for a, b in zip(etas, etas[1:])):
        raise ValueError("etas must be strictly decreasing")
    if base.kappa == 0.0:
        raise ValueError("eta convergence study requires kappa > 0")
    t_final = max(times)

    ref_cfg = DynamicConfig(base.kappa, LIMIT_NOISE, base.grid, base.dt, base.delta)
    ref = {t: pdf_values(m) for t, m in run_until(ref_cfg, model, init, t_final, times).snapshots
           if t in times}

    errors: dict[tuple[float, float], float] = {}
    for eta in etas:
        cfg = DynamicConfig(base.kappa, eta, base.grid, base.dt, base.delta)
        traj = run_until(cfg, model, init, t_final, times)
        for t, m in traj.snapshots:
            if t in ref:
                errors[(eta, t)] = float(np.max(np.abs(pdf_values(m) - ref[t])))

    rows = []
    for i, eta in enumerate(etas):
        for t in times:
            rate = None
            if i > 0:
                prev = etas[i - 1]
                err_a, err_b = errors[(prev, t)], errors[(eta, t)]
                if err_a > 0.0 and err_b > 0.0:
                    rate = math.log(err_a / err_b) / math.log(prev / eta)
            rows.append(ConvergenceRow(eta, t, errors[(eta, t)], rate))
    return rows
