"""Catch-data ingestion, run configuration parsing, and CSV emission.

All numeric CSV output uses the shortest round-trip decimal representation
with LF line endings, so repeated runs on the same platform are
bit-identical and parsing the file recovers the exact doubles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .calibration import EmpiricalSample, FitSpec
from .dynamics import DynamicConfig, Trajectory
from .measures import Grid, GridMeasure, pdf_values
from .utility import CompetitionParams

__all__ = [
    "CatchDataset",
    "ConfigError",
    "RunConfig",
    "bundled_catches_path",
    "load_catches",
    "save_catches",
    "normalize",
    "load_run_config",
    "write_measure_csv",
    "write_trajectory_csv",
    "write_convergence_csv",
    "write_pdf_table",
]


def _fmt(value: float) -> str:
    # shortest decimal that round-trips the exact double
    return repr(float(value))


@dataclass(frozen=True)
class CatchDataset:
    """Per-year catch counts; each year needs a strictly positive maximum."""

    records: tuple  # ((year, (catch, ...)), ...)

    def __post_init__(self):
        for year, catches in self.records:
            if len(catches) == 0:
                raise ValueError(f"year {year}: no records")
            if max(catches) <= 0:
                raise ValueError(f"year {year}: maximum catch is 0, normalization undefined")

    @property
    def total_records(self) -> int:
        return sum(len(c) for _, c in self.records)


def bundled_catches_path() -> Path:
    """Path of the shipped competition dataset."""
    return Path(resources.files("rational_logit").joinpath("data/catches.csv"))


def load_catches(path) -> CatchDataset:
    """Parse a `year,catch` CSV into a CatchDataset, preserving row order."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "year,catch":
        raise ValueError(f"{path}: expected header 'year,catch'")
    by_year: dict[str, list[int]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(parts)}")
        year, raw = parts[0].strip(), parts[1].strip()
        try:
            catch = int(raw)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: catch {raw!r} is not an integer") from None
        if catch < 0:
            raise ValueError(f"{path}:{lineno}: negative catch {catch}")
        by_year.setdefault(year, []).append(catch)
    return CatchDataset(tuple((y, tuple(c)) for y, c in by_year.items()))


def save_catches(path, dataset: CatchDataset) -> None:
    lines = ["year,catch"]
    for year, catches in dataset.records:
        lines += [f"{year},{c}" for c in catches]
    Path(path).write_text("\n".join(lines) + "\n")


def normalize(dataset: CatchDataset) -> EmpiricalSample:
    """Divide each catch by its own year's maximum and pool the values."""
    values = []
    per_year_max = {}
    for year, catches in dataset.records:
        year_max = max(catches)
        per_year_max[year] = year_max
        values += [c / year_max for c in catches]
    return EmpiricalSample(np.array(values), per_year_max)


class ConfigError(ValueError):
    """Invalid run configuration; `problems` lists one message per field."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run needs: dynamic config, utility parameters,
    initial condition name, snapshot times, and the step budget."""

    dynamic: DynamicConfig
    utility: CompetitionParams
    init: str
    record_times: tuple
    max_steps: int
    fit: FitSpec | None = None


def _get(doc: dict, dotted: str, default=None):
    node = doc
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def load_run_config(path) -> RunConfig:
    """Parse and fully validate a JSON run configuration.

    Collects every field problem before raising, so a bad config reports
    all of its errors at once.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError([f"not valid JSON: {exc}"]) from None
    problems: list[str] = []

    def check(dotted, default, validator, message):
        value = _get(doc, dotted, default)
        if value is None or not validator(value):
            problems.append(f"{dotted}: {message} (got {value!r})")
            return None
        return value

    is_num = lambda v: isinstance(v, (int, float)) and not isinstance(v, bool)
    n = check("grid.n", 500, lambda v: isinstance(v, int) and v >= 2, "integer >= 2 required")
    kappa = check("dynamic.kappa", None, lambda v: is_num(v) and 0.0 <= v <= 1.0,
                  "number in [0, 1] required")
    eta = _get(doc, "dynamic.eta")
    if eta == "limit":
        eta_value = None
        if kappa == 0.0:
            problems.append('dynamic.eta: "limit" requires dynamic.kappa > 0')
    elif is_num(eta) and eta > 0:
        eta_value = float(eta)
    else:
        problems.append(f'dynamic.eta: positive number or "limit" required (got {eta!r})')
        eta_value = None
    dt = check("dynamic.dt", 0.001, lambda v: is_num(v) and 0.0 < v <= 1.0,
               "number in (0, 1] required")
    delta = check("dynamic.delta", 1e-11, lambda v: is_num(v) and v > 0.0,
                  "positive number required")
    max_steps = check("dynamic.max_steps", 1_000_000, lambda v: isinstance(v, int) and v >= 1,
                      "integer >= 1 required")
    a = check("utility.a", 0.27, lambda v: is_num(v) and v >= 0, "number >= 0 required")
    b = check("utility.b", 0.23, lambda v: is_num(v) and v >= 0, "number >= 0 required")
    c = check("utility.c", 1.0, lambda v: is_num(v) and v >= 0, "number >= 0 required")
    d = check("utility.d", 1.0, lambda v: is_num(v) and v >= 0, "number >= 0 required")
    alpha = check("utility.alpha", 0.2, lambda v: is_num(v) and 0.0 < v < 1.0,
                  "number in (0, 1) required")
    epsilon = _get(doc, "utility.epsilon")
    if epsilon is not None and not (is_num(epsilon) and epsilon > 0):
        problems.append(f"utility.epsilon: positive number required (got {epsilon!r})")
        epsilon = None
    init = check("init", "uniform", lambda v: v == "uniform", 'only "uniform" is supported')
    record_times = _get(doc, "record_times", [1.0, 10.0])
    if not (isinstance(record_times, list) and all(is_num(t) and t >= 0 for t in record_times)):
        problems.append(f"record_times: list of numbers >= 0 required (got {record_times!r})")
        record_times = []

    fit_spec = None
    if "fit" in doc and not problems:
        fit_doc = doc["fit"]
        try:
            fit_spec = FitSpec(
                free=tuple(fit_doc.get("free", ())),
                bounds={k: tuple(v) for k, v in fit_doc.get("bounds", {}).items()},
                fixed_params=CompetitionParams(a=a, b=b, c=c, d=d, alpha=alpha, epsilon=epsilon),
                fixed_eta=eta_value,
                fixed_kappa=kappa,
                levels=fit_doc.get("levels", 2),
                points_per_dim=fit_doc.get("points_per_dim", 5),
                shrink=fit_doc.get("shrink", 0.5),
                max_steps=fit_doc.get("max_steps", max_steps),
            )
        except (KeyError, TypeError, ValueError) as exc:
            problems.append(f"fit: {exc}")

    if problems:
        raise ConfigError(problems)

    dynamic = DynamicConfig(float(kappa), eta_value, Grid(n), float(dt), float(delta))
    params = CompetitionParams(a=float(a), b=float(b), c=float(c), d=float(d),
                               alpha=float(alpha),
                               epsilon=float(epsilon) if epsilon is not None else None)
    return RunConfig(dynamic, params, init, tuple(float(t) for t in record_times),
                     int(max_steps), fit_spec)


def write_measure_csv(path, mu: GridMeasure) -> None:
    """Rows `x_mid,mass,pdf`, one per cell."""
    pdf = pdf_values(mu)
    lines = ["x_mid,mass,pdf"]
    for x, m, p in zip(mu.grid.midpoints, mu.mass, pdf):
        lines.append(f"{_fmt(x)},{_fmt(m)},{_fmt(p)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """Rows `time,x_mid,pdf` for every snapshot and cell."""
    lines = ["time,x_mid,pdf"]
    for t, mu in traj.snapshots:
        pdf = pdf_values(mu)
        for x, p in zip(mu.grid.midpoints, pdf):
            lines.append(f"{_fmt(t)},{_fmt(x)},{_fmt(p)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_convergence_csv(path, rows) -> None:
    """Rows `eta,time,error,rate`; the rate field is empty where undefined."""
    lines = ["eta,time,error,rate"]
    for row in rows:
        rate = "" if row.rate is None else _fmt(row.rate)
        lines.append(f"{_fmt(row.eta)},{_fmt(row.time)},{_fmt(row.error)},{rate}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_pdf_table(path, x_mid, series, names=None) -> None:
    """Rows `x_mid,<name1>[,<name2>...]` for one or more PDF columns of
    equal length."""
    series = [np.asarray(s, dtype=float) for s in series]
    x_mid = np.asarray(x_mid, dtype=float)
    if any(len(s) != len(x_mid) for s in series):
        raise ValueError("write_pdf_table: series length mismatch")
    if names is None:
        names = ["pdf"] + [f"pdf{i + 1}" for i in range(1, len(series))]
    if len(names) != len(series):
        raise ValueError("write_pdf_table: one name per series required")
    lines = ["x_mid," + ",".join(names)]
    for i, x in enumerate(x_mid):
        lines.append(_fmt(x) + "," + ",".join(_fmt(s[i]) for s in series))
    Path(path).write_text("\n".join(lines) + "\n")
