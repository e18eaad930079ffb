import numpy as np
import pytest

from rational_logit.calibration import (EmpiricalSample, FitSpec, NonStationaryError,
                                        empirical_pdf, empirical_stats, fit_objective,
                                        fit_search)
from rational_logit.dataio import bundled_catches_path, load_catches, normalize
from rational_logit.dynamics import DynamicConfig, run_to_stationary
from rational_logit.measures import Grid, mean_and_std, uniform
from rational_logit.utility import CompetitionParams, CompetitionUtility

# coarse solver settings: keep every fit evaluation around tens of ms
COARSE_GRID = Grid(100)
COARSE_DT = 0.01
COARSE_DELTA = 1e-9


@pytest.fixture(scope="module")
def table_sample():
    return normalize(load_catches(bundled_catches_path()))


def coarse_moments(params, eta=0.01, kappa=1.0):
    config = DynamicConfig(kappa, eta, COARSE_GRID, COARSE_DT, COARSE_DELTA)
    model = CompetitionUtility(COARSE_GRID, params)
    traj = run_to_stationary(config, model, uniform(COARSE_GRID), 200_000)
    return mean_and_std(traj.final_measure)


class TestEmpiricalStats:
    def test_dataset_mean(self, table_sample):
        mean, _ = empirical_stats(table_sample)
        assert mean == pytest.approx(0.32471, abs=5e-5)

    def test_dataset_std(self, table_sample):
        # population convention: this is what reproduces the reported value
        _, std = empirical_stats(table_sample)
        assert std == pytest.approx(0.30352, abs=5e-4)

    def test_single_year(self):
        sample = EmpiricalSample(np.array([0.5, 1.0]), {"y": 20})
        mean, std = empirical_stats(sample)
        assert mean == 0.75 and std == 0.25

    def test_permutation_invariant(self, table_sample):
        rng = np.random.default_rng(0)
        shuffled = EmpiricalSample(rng.permutation(table_sample.values),
                                   table_sample.per_year_max)
        np.testing.assert_allclose(empirical_stats(shuffled),
                                   empirical_stats(table_sample), rtol=1e-12)

    def test_empty_sample(self):
        with pytest.raises(ValueError):
            empirical_stats(EmpiricalSample(np.array([]), {}))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            EmpiricalSample(np.array([0.5, 1.2]), {"y": 10})


class TestEmpiricalPdf:
    def test_all_at_one(self):
        sample = EmpiricalSample(np.ones(5), {"y": 3})
        np.testing.assert_array_equal(empirical_pdf(sample, 10),
                                      [0.0] * 9 + [10.0])

    def test_uniform_synthetic(self):
        values = (np.arange(1000) + 0.5) / 1000
        pdf = empirical_pdf(EmpiricalSample(values, {}), 10)
        np.testing.assert_allclose(pdf, 1.0, atol=1e-12)

    def test_integrates_to_one(self, table_sample):
        pdf = empirical_pdf(table_sample, 20)
        assert pdf.sum() / 20 == pytest.approx(1.0, abs=1e-12)

    def test_dataset_is_bimodal(self, table_sample):
        pdf = empirical_pdf(table_sample, 20)
        middle = pdf[8:12].mean()
        assert pdf[:3].max() > middle
        assert pdf[-1] > middle

    def test_rejects_few_bins(self):
        with pytest.raises(ValueError):
            empirical_pdf(EmpiricalSample(np.array([0.5]), {}), 1)


class TestFitObjective:
    def test_zero_at_matched_targets(self):
        params = CompetitionParams()
        target = coarse_moments(params)
        config = DynamicConfig(1.0, 0.01, COARSE_GRID, COARSE_DT, COARSE_DELTA)
        assert fit_objective(params, config, target) == pytest.approx(0.0, abs=1e-10)

    def test_increases_away_from_optimum(self):
        base = CompetitionParams()
        target = coarse_moments(base)
        config = DynamicConfig(1.0, 0.01, COARSE_GRID, COARSE_DT, COARSE_DELTA)
        obj_at = fit_objective(base, config, target)
        obj_doubled = fit_objective(CompetitionParams(a=2 * base.a), config, target)
        assert obj_doubled > obj_at

    def test_nonstationary_reported_distinctly(self):
        config = DynamicConfig(1.0, 0.01, COARSE_GRID, COARSE_DT, 1e-300)
        with pytest.raises(NonStationaryError):
            fit_objective(CompetitionParams(), config, (0.3, 0.3), max_steps=5)


class TestFitSearch:
    def test_recovers_generating_parameter(self):
        # self-consistency: targets generated at a = 0.27 are recovered
        # within the final grid resolution
        target = coarse_moments(CompetitionParams(a=0.27))
        spec = FitSpec(free=("a",), bounds={"a": (0.1, 0.5)},
                       levels=2, points_per_dim=5, max_steps=200_000)
        result = fit_search(spec, target, COARSE_GRID, COARSE_DT, COARSE_DELTA)
        assert result.best["a"] == pytest.approx(0.27, abs=0.03)
        assert result.objective <= 5e-4

    def test_pure_grid_search(self):
        target = (0.3, 0.3)
        spec = FitSpec(free=("a",), bounds={"a": (0.2, 0.4)},
                       levels=0, points_per_dim=3, max_steps=200_000)
        result = fit_search(spec, target, COARSE_GRID, COARSE_DT, COARSE_DELTA)
        assert result.evaluation_count == 3
        assert min(abs(result.best["a"] - v) for v in (0.2, 0.3, 0.4)) < 1e-12

    def test_stays_inside_bounds_and_trace_consistent(self):
        target = coarse_moments(CompetitionParams())
        spec = FitSpec(free=("a", "b"), bounds={"a": (0.2, 0.35), "b": (0.15, 0.3)},
                       levels=1, points_per_dim=3, max_steps=200_000)
        result = fit_search(spec, target, COARSE_GRID, COARSE_DT, COARSE_DELTA)
        assert 0.2 <= result.best["a"] <= 0.35
        assert 0.15 <= result.best["b"] <= 0.3
        objectives = [obj for _, obj, err in result.evaluations if err is None]
        assert result.objective <= min(objectives) + 1e-15

    def test_empty_free_set_single_evaluation(self):
        target = (0.3, 0.3)
        spec = FitSpec(free=(), bounds={}, levels=0, max_steps=200_000)
        result = fit_search(spec, target, COARSE_GRID, COARSE_DT, COARSE_DELTA)
        assert result.evaluation_count == 1
        assert result.best == {"a": 0.27, "b": 0.23, "eta": 0.01, "kappa": 1.0}

    def test_validates_bounds(self):
        with pytest.raises(ValueError):
            FitSpec(free=("a",), bounds={"a": (0.5, 0.5)})
        with pytest.raises(ValueError):
            FitSpec(free=("kappa",), bounds={"kappa": (0.5, 1.5)})
        with pytest.raises(ValueError):
            FitSpec(free=("eta",), bounds={"eta": (0.0, 0.1)})
        with pytest.raises(ValueError):
            FitSpec(free=("zzz",), bounds={"zzz": (0.0, 1.0)})

    def test_all_failures_reported(self):
        spec = FitSpec(free=("a",), bounds={"a": (0.1, 0.5)}, levels=0,
                       points_per_dim=2, max_steps=1)
        with pytest.raises(RuntimeError, match="every evaluation failed"):
            fit_search(spec, (0.3, 0.3), COARSE_GRID, COARSE_DT, 1e-300)
