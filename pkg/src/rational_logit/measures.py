"""Discretized probability measures on the uniform grid of [0, 1].

A measure is stored as the vector of cell masses over N uniform cells
Omega_i = [(i-1)/N, i/N) (last cell closed), with midpoints (i-1/2)/N.
The piecewise-constant density (PDF) is N times the mass vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "GridMeasure",
    "uniform",
    "from_masses",
    "variational_distance",
    "pdf_values",
    "mean_and_std",
    "refine",
]

MASS_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Uniform partition of [0, 1] into n_cells cells."""

    n_cells: int

    def __post_init__(self):
        if not isinstance(self.n_cells, (int, np.integer)) or self.n_cells < 2:
            raise ValueError(f"grid needs an integer n_cells >= 2, got {self.n_cells!r}")

    @property
    def cell_width(self) -> float:
        return 1.0 / self.n_cells

    @property
    def midpoints(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) / self.n_cells


@dataclass(frozen=True)
class GridMeasure:
    """Probability masses over the cells of a Grid.

    Entries must be nonnegative and sum to 1 within MASS_SUM_TOL; evolution
    code is expected to preserve this (the constructor observes, it never
    silently renormalizes).
    """

    grid: Grid
    mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=float)
        if mass.shape != (self.grid.n_cells,):
            raise ValueError(f"mass vector has shape {mass.shape}, grid has {self.grid.n_cells} cells")
        if np.any(mass < 0.0) or np.any(np.isnan(mass)):
            raise ValueError("cell masses must be nonnegative")
        if abs(mass.sum() - 1.0) > MASS_SUM_TOL:
            raise ValueError(f"cell masses sum to {mass.sum()!r}, expected 1 within {MASS_SUM_TOL}")
        mass = mass.copy()
        mass.flags.writeable = False
        object.__setattr__(self, "mass", mass)


def uniform(grid: Grid) -> GridMeasure:
    """The uniform distribution: every cell mass equal to 1/N."""
    return GridMeasure(grid, np.full(grid.n_cells, 1.0 / grid.n_cells))


def from_masses(grid: Grid, raw) -> GridMeasure:
    """Normalize a vector of nonnegative weights into a GridMeasure.

    Rejects negative entries and the all-zero vector (degenerate weights).
    """
    raw = np.asarray(raw, dtype=float)
    if np.any(raw < 0.0) or np.any(np.isnan(raw)):
        raise ValueError("from_masses: entries must be nonnegative")
    total = raw.sum()
    if total <= 0.0:
        raise ValueError("from_masses: degenerate all-zero weight vector")
    return GridMeasure(grid, raw / total)


def variational_distance(mu: GridMeasure, nu: GridMeasure) -> float:
    """Variational norm ||mu - nu|| = sum_i |mu_i - nu_i|.

    For piecewise-constant densities on a shared grid the optimizing test
    function is the sign pattern of the cell mass differences, so the sup
    over |g| <= 1 collapses to the plain L1 cell-mass sum (max value 2).
    """
    if mu.grid != nu.grid:
        raise ValueError("variational_distance: grid mismatch")
    return float(np.abs(mu.mass - nu.mass).sum())


def pdf_values(mu: GridMeasure) -> np.ndarray:
    """Piecewise-constant density at cell midpoints: N * mass."""
    return mu.grid.n_cells * mu.mass


def mean_and_std(mu: GridMeasure) -> tuple[float, float]:
    """Midpoint-quadrature mean and population standard deviation."""
    x = mu.grid.midpoints
    mean = float(x @ mu.mass)
    var = float((x * x) @ mu.mass) - mean * mean
    return mean, math.sqrt(max(var, 0.0))


def refine(mu: GridMeasure, factor: int) -> GridMeasure:
    """Split every cell into `factor` equal subcells, preserving the density.

    Lets measures on different grids be compared exactly on a common
    refinement (no interpolation error for piecewise-constant densities).
    """
    if not isinstance(factor, (int, np.integer)) or factor < 1:
        raise ValueError(f"refine: factor must be a positive integer, got {factor!r}")
    fine = np.repeat(mu.mass / factor, factor)
    return GridMeasure(Grid(mu.grid.n_cells * int(factor)), fine)
