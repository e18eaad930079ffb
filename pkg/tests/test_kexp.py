import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rational_logit.kexp import d_e_kappa, e_kappa, log_e_kappa, scaled_limit_residual


def e_kappa_direct(kappa, z):
    # literal evaluation of the defining formula, only safe for moderate z
    if kappa == 0.0:
        return math.exp(z)
    return (kappa * z + math.sqrt(kappa * kappa * z * z + 1.0)) ** (1.0 / kappa)


class TestLogEKappa:
    def test_kappa_zero_is_identity(self):
        assert log_e_kappa(0.0, -3.7) == -3.7

    def test_kappa_one(self):
        # e_1(0.75) = 0.75 + sqrt(0.5625 + 1) = 2
        assert log_e_kappa(1.0, 0.75) == pytest.approx(math.log(2.0), rel=1e-14)

    def test_kappa_half(self):
        # (0.75 + 1.25)^2 = 4
        assert log_e_kappa(0.5, 1.5) == pytest.approx(math.log(4.0), rel=1e-14)

    def test_matches_direct_formula(self):
        for kappa in (0.1, 0.3, 0.7, 1.0):
            for z in (-20.0, -1.0, 0.0, 0.5, 30.0):
                assert log_e_kappa(kappa, z) == pytest.approx(
                    math.log(e_kappa_direct(kappa, z)), rel=1e-12, abs=1e-14)

    def test_no_overflow_for_extreme_argument(self):
        # arguments like U/eta with eta = 1e-4 must stay finite in log space
        assert np.isfinite(log_e_kappa(1.0, 1e8))
        assert np.isfinite(log_e_kappa(1e-3, -1e8))

    def test_vectorized(self):
        z = np.linspace(-5, 5, 11)
        out = log_e_kappa(0.5, z)
        assert out.shape == z.shape

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            log_e_kappa(0.5, float("nan"))

    def test_rejects_bad_kappa(self):
        for bad in (-0.1, 1.5, float("nan")):
            with pytest.raises(ValueError):
                log_e_kappa(bad, 1.0)

    @given(st.floats(0.0, 1.0), st.floats(-50.0, 50.0), st.floats(-50.0, 50.0))
    def test_strictly_increasing(self, kappa, z1, z2):
        lo, hi = min(z1, z2), max(z1, z2)
        if hi - lo <= 1e-9 * max(1.0, abs(lo), abs(hi)):
            return  # below roundoff resolution of asinh
        assert log_e_kappa(kappa, lo) < log_e_kappa(kappa, hi)

    @given(st.floats(-10.0, 10.0))
    def test_continuity_in_kappa_at_zero(self, z):
        # |asinh(kz)/k - z| ~ k^2 z^3 / 6, which is 1.67e-6 at |z| = 10
        assert abs(log_e_kappa(1e-4, z) - z) <= 1.7e-6

    def test_zero_at_origin(self):
        for kappa in (0.0, 0.25, 1.0):
            assert log_e_kappa(kappa, 0.0) == 0.0


class TestEKappa:
    def test_one_at_origin(self):
        assert e_kappa(0.37, 0.0) == 1.0

    def test_kappa_one_value(self):
        assert e_kappa(1.0, 0.75) == pytest.approx(2.0, rel=1e-14)

    def test_reflection_point(self):
        assert e_kappa(1.0, -0.75) == pytest.approx(0.5, rel=1e-14)

    @given(st.floats(0.0, 1.0), st.floats(-50.0, 50.0))
    def test_reflection_identity(self, kappa, z):
        assert e_kappa(kappa, z) * e_kappa(kappa, -z) == pytest.approx(1.0, rel=1e-12)

    def test_growth_like_power(self):
        # for kappa = 1, e_kappa(z) ~ 2z as z -> +inf
        z = 1e6
        assert e_kappa(1.0, z) / (2.0 * z) == pytest.approx(1.0, rel=1e-5)

    def test_overflow_goes_to_inf(self):
        assert e_kappa(0.0, 1e4) == math.inf


class TestDEKappa:
    def test_unit_at_origin(self):
        assert d_e_kappa(1.0, 0.0) == 1.0

    def test_kappa_one_value(self):
        # e_1(0.75)/sqrt(0.5625 + 1) = 2 / 1.25
        assert d_e_kappa(1.0, 0.75) == pytest.approx(1.6, rel=1e-14)

    def test_kappa_zero_is_exp(self):
        assert d_e_kappa(0.0, 2.0) == pytest.approx(math.exp(2.0), rel=1e-14)

    @given(st.floats(0.0, 1.0), st.floats(-10.0, 10.0))
    @settings(max_examples=200)
    def test_matches_central_difference(self, kappa, z):
        h = 1e-5 * max(1.0, abs(z))
        fd = (e_kappa(kappa, z + h) - e_kappa(kappa, z - h)) / (2.0 * h)
        assert d_e_kappa(kappa, z) == pytest.approx(fd, rel=1e-6)


class TestScaledLimitResidual:
    def test_frozen_value(self):
        # kappa=1, eta=0.2, u=1: |0.5 + sqrt(0.25 + 0.01) - 1|
        expected = abs(0.5 + math.sqrt(0.25 + 0.01) - 1.0)
        assert scaled_limit_residual(1.0, 0.2, 1.0) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.009902, abs=1e-6)

    def test_decreasing_in_eta(self):
        # halving eta at least halves the residual (it is O(eta^2) here)
        for kappa in (0.25, 0.5, 1.0):
            for u in (0.1, 1.0, 2.0):
                res = [scaled_limit_residual(kappa, eta, u) for eta in (0.1, 0.05, 0.025)]
                assert res[0] > res[1] > res[2] > 0.0
                assert res[1] <= 0.75 * res[0]
                assert res[2] <= 0.75 * res[1]

    def test_ratio_to_eta_bounded(self):
        etas = np.logspace(-1, -5, 9)
        for kappa in (0.25, 0.5, 1.0):
            for u in np.linspace(0.1, 2.0, 8):
                ratios = [scaled_limit_residual(kappa, eta, u) / eta for eta in etas]
                # bounded by the coarsest-eta ratio: the residual is o(eta)
                assert max(ratios) <= ratios[0] + 1e-12

    def test_rejects_kappa_zero(self):
        with pytest.raises(ValueError):
            scaled_limit_residual(0.0, 0.1, 1.0)

    def test_rejects_nonpositive_inputs(self):
        with pytest.raises(ValueError):
            scaled_limit_residual(1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            scaled_limit_residual(1.0, 0.1, -1.0)
