#!/usr/bin/env python3
"""Regenerate every data exhibit into out/exhibits/.

Runs the CLI subcommands with the shipped fitted configuration:
stationary PDF + moments, eta-convergence table, kappa sweep, transient
trajectories at several noise levels, and the empirical-vs-model PDF
comparison table. Takes a few minutes at full resolution.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from rational_logit import (CompetitionParams, CompetitionUtility, DynamicConfig,
                            Grid, bundled_catches_path, empirical_pdf, load_catches,
                            normalize, run_to_stationary, uniform, write_pdf_table)
from rational_logit.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent
CONFIG = ROOT / "configs" / "fitted.json"
OUT = ROOT / "out" / "exhibits"


def coarsen_pdf(mass: np.ndarray, bins: int) -> np.ndarray:
    """Aggregate cell masses onto `bins` uniform bins (mass-exact)."""
    per_bin = len(mass) // bins
    return mass.reshape(bins, per_bin).sum(axis=1) * bins


def transient_config(eta) -> Path:
    doc = json.loads(CONFIG.read_text())
    doc["dynamic"]["eta"] = eta
    doc["record_times"] = [0.5, 1.0, 2.0, 5.0, 10.0]
    path = OUT / f"transient_config_eta_{eta}.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    rc = 0
    rc |= cli_main(["stationary", "--config", str(CONFIG), "--out", str(OUT / "stationary")])
    rc |= cli_main(["convergence-eta", "--config", str(CONFIG), "--out", str(OUT / "convergence_eta")])
    rc |= cli_main(["sweep-kappa", "--config", str(CONFIG), "--out", str(OUT / "kappa_sweep"),
                    "--kappas", "0,0.1,0.5,1"])
    for eta in ["limit", 0.01, 0.05, 0.1]:
        rc |= cli_main(["simulate", "--config", str(transient_config(eta)),
                        "--out", str(OUT / f"transient_eta_{eta}")])

    # empirical vs fitted-model PDF on a common 20-bin grid
    sample = normalize(load_catches(bundled_catches_path()))
    bins = 20
    grid = Grid(500)
    model = CompetitionUtility(grid, CompetitionParams())
    traj = run_to_stationary(DynamicConfig(1.0, 0.01, grid), model, uniform(grid), 1_000_000)
    centers = (np.arange(bins) + 0.5) / bins
    write_pdf_table(OUT / "empirical_vs_model_pdf.csv", centers,
                    [empirical_pdf(sample, bins), coarsen_pdf(traj.final_measure.mass, bins)],
                    names=["pdf_empirical", "pdf_model"])
    print(f"exhibits written under {OUT}")
    return rc


if __name__ == "__main__":
    sys.exit(main())
