import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ringspin.chain import ChainSpec, CouplingProfile, dipolar_ratios, max_neighbors
from ringspin.metrics import (
    TimeWindow,
    accuracy_threshold,
    avg_probability,
    error_map,
    independent_targets,
    mean_truncation_error,
    probability_map,
    target_multiplicities,
    transfer_metrics,
    trig_power_integral,
    truncation_error,
)
from ringspin.metrics import _error_from_modes
from ringspin.oracle import simpson_integral
from ringspin.spectral import amplitude, mode_eigenvalues

# (1/T) int_0^T cos^4 tau dtau at T = 4, by the antiderivative
# 3 tau/8 + sin(2 tau)/4 + sin(4 tau)/32
COS4_AVG_T4 = 3.0 / 8.0 + math.sin(8.0) / 16.0 + math.sin(16.0) / 128.0


class TestTimeWindow:
    def test_positive_only(self):
        TimeWindow(0.5)
        with pytest.raises(ValueError):
            TimeWindow(0.0)
        with pytest.raises(ValueError):
            TimeWindow(-3.0)

    def test_matched_default(self):
        assert TimeWindow.matched(70).t_max == 70.0


class TestTrigPowerIntegral:
    def test_single_mode_is_window_length(self):
        assert trig_power_integral([1.0], [0.7], 5.0) == pytest.approx(5.0)

    def test_two_degenerate_modes_add_coherently(self):
        # equal frequencies merge: |c1 + c2|^2 * T
        val = trig_power_integral([0.3, 0.7], [1.1, 1.1 + 1e-15], 2.0)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_cosine_squared(self):
        # cos(omega tau) = (e^{-i omega tau} + e^{+i omega tau}) / 2
        T, omega = 4.0, 2.0
        val = trig_power_integral([0.5, 0.5], [omega, -omega], T)
        expected = T / 2.0 + math.sin(2.0 * omega * T) / (4.0 * omega)
        assert val == pytest.approx(expected, abs=1e-12)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            trig_power_integral([1.0, 2.0], [0.5], 1.0)


class TestAvgProbability:
    def test_square_ring_return_probability(self):
        # |p_11|^2 = cos^4 tau on the nearest-neighbor 4-ring
        value = avg_probability(ChainSpec(4, 1), dipolar_ratios(4), 1, TimeWindow(4.0))
        assert value == pytest.approx(COS4_AVG_T4, abs=1e-13)

    def test_short_window_limit(self):
        # continuity: P_1 -> 1 as the window shrinks
        value = avg_probability(ChainSpec(6, 3), dipolar_ratios(6), 1, TimeWindow(1e-9))
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_target_bounds(self):
        with pytest.raises(ValueError):
            avg_probability(ChainSpec(6, 2), dipolar_ratios(6), 7, TimeWindow(6.0))

    @given(nodes=st.integers(min_value=3, max_value=30))
    @settings(max_examples=30)
    def test_mirror_weighted_sum_is_one(self, nodes):
        """Time averaging preserves unitarity: probabilities over the
        independent targets, counted with mirror multiplicity, sum to 1."""
        spec = ChainSpec(nodes, max(1, max_neighbors(nodes) // 2))
        profile = dipolar_ratios(nodes)
        window = TimeWindow.matched(nodes)
        probs = np.array([
            avg_probability(spec, profile, t, window)
            for t in independent_targets(nodes)
        ])
        mult = target_multiplicities(nodes)
        assert int(mult.sum()) == nodes
        assert float(mult @ probs) == pytest.approx(1.0, abs=1e-12)


class TestTruncationError:
    def test_zero_at_full_range(self):
        spec = ChainSpec.all_neighbors(10)
        profile = dipolar_ratios(10)
        for target in (1, 3, 6):
            assert truncation_error(spec, profile, target, TimeWindow(10.0)) == 0.0

    def test_reflection_invariance(self):
        spec = ChainSpec(12, 3)
        profile = dipolar_ratios(12)
        window = TimeWindow(12.0)
        for k in (2, 3, 5):
            mirror = 12 + 2 - k
            a = truncation_error(spec, profile, k, window)
            b = truncation_error(spec, profile, mirror, window)
            assert a == pytest.approx(b, abs=1e-12)

    def test_agrees_with_simpson_quadrature(self):
        nodes, t_max, step = 10, 10.0, 1e-3
        grid = np.linspace(0.0, t_max, int(round(t_max / step)) + 1)
        profile = dipolar_ratios(nodes)
        full = ChainSpec.all_neighbors(nodes)
        window = TimeWindow(t_max)
        for m in (1, 2, 4):
            spec = ChainSpec(nodes, m)
            for target in (1, 3, 6):
                p = amplitude(spec, profile, 1, target, grid)
                p_ref = amplitude(full, profile, 1, target, grid)
                num = simpson_integral(np.abs(p - p_ref) ** 2, t_max)
                den = simpson_integral(np.abs(p_ref) ** 2, t_max)
                exact = truncation_error(spec, profile, target, window)
                assert exact == pytest.approx(math.sqrt(num / den), abs=1e-6)

    def test_time_rescaling_invariance(self):
        """Scaling every coupling by c and the window by 1/c leaves the
        relative error unchanged; checked at the mode level because the
        public profile type pins d_1 = 1."""
        nodes, m = 11, 2
        profile = dipolar_ratios(nodes)
        w = np.random.default_rng(3).normal(size=6)
        lam = mode_eigenvalues(ChainSpec(nodes, m), profile)
        lam_ref = mode_eigenvalues(ChainSpec.all_neighbors(nodes), profile)
        base = _error_from_modes(w, lam, lam_ref, 11.0)
        for c in (0.25, 3.0, 17.0):
            scaled = _error_from_modes(w, c * lam, c * lam_ref, 11.0 / c)
            assert scaled == pytest.approx(base, rel=1e-12)


class TestMeanTruncationError:
    def test_zero_at_full_range(self):
        spec = ChainSpec.all_neighbors(9)
        assert mean_truncation_error(spec, dipolar_ratios(9), TimeWindow(9.0)) == 0.0

    @pytest.mark.parametrize("nodes", [8, 9])
    def test_matches_weighted_sum(self, nodes):
        spec = ChainSpec(nodes, 2)
        profile = dipolar_ratios(nodes)
        window = TimeWindow.matched(nodes)
        errors = [
            truncation_error(spec, profile, t, window)
            for t in independent_targets(nodes)
        ]
        mult = target_multiplicities(nodes)
        expected = float(mult @ np.asarray(errors)) / nodes
        assert mean_truncation_error(spec, profile, window) == pytest.approx(expected)


class TestSweeps:
    def test_transfer_metrics_consistency(self):
        spec = ChainSpec(10, 3)
        profile = dipolar_ratios(10)
        window = TimeWindow.matched(10)
        tm = transfer_metrics(spec, profile, window)
        assert tm.targets == independent_targets(10)
        for i, t in enumerate(tm.targets):
            assert tm.avg_probabilities[i] == pytest.approx(
                avg_probability(spec, profile, t, window), abs=1e-13
            )
            assert tm.errors[i] == pytest.approx(
                truncation_error(spec, profile, t, window), abs=1e-12
            )
        assert tm.mean_error == pytest.approx(
            mean_truncation_error(spec, profile, window), abs=1e-12
        )

    def test_maps_match_pointwise_routes(self):
        nodes = 9
        profile = dipolar_ratios(nodes)
        window = TimeWindow.matched(nodes)
        probs = probability_map(nodes, profile, window)
        errors, means = error_map(nodes, profile, window)
        nf = max_neighbors(nodes)
        assert probs.shape == errors.shape == (nf, nf + 1)
        for m in (1, nf):
            spec = ChainSpec(nodes, m)
            for i, t in enumerate(independent_targets(nodes)):
                assert probs[m - 1][i] == pytest.approx(
                    avg_probability(spec, profile, t, window), abs=1e-13
                )
                assert errors[m - 1][i] == pytest.approx(
                    truncation_error(spec, profile, t, window), abs=1e-12
                )
            assert means[m - 1] == pytest.approx(
                mean_truncation_error(spec, profile, window), abs=1e-12
            )

    def test_full_range_error_row_is_zero(self):
        errors, means = error_map(8, dipolar_ratios(8), TimeWindow(8.0))
        assert np.all(errors[-1] == 0.0)
        assert means[-1] == 0.0


class TestAccuracyThreshold:
    def test_twenty_ring_needs_eight_neighbors(self):
        result = accuracy_threshold(20, dipolar_ratios(20), 0.1, TimeWindow.matched(20))
        assert result.min_neighbors == 8

    def test_saturates_at_one_when_every_radius_is_accurate(self):
        # profile with negligible far couplings: even M = 1 is accurate
        profile = CouplingProfile((1.0, 1e-9, 1e-9), kind="custom")
        result = accuracy_threshold(7, profile, 0.5, TimeWindow(7.0))
        assert result.min_neighbors == 1

    def test_audit_table_covers_every_radius(self):
        result = accuracy_threshold(14, dipolar_ratios(14), 0.1, TimeWindow.matched(14))
        assert result.max_error_per_m.shape == (max_neighbors(14),)
        # everything from the threshold on satisfies the tolerance
        assert np.all(result.max_error_per_m[result.min_neighbors - 1 :] <= 0.1)
        # and the radius just below it does not (unless the threshold is 1)
        if result.min_neighbors > 1:
            assert result.max_error_per_m[result.min_neighbors - 2] > 0.1

    def test_epsilon_bounds(self):
        with pytest.raises(ValueError):
            accuracy_threshold(8, dipolar_ratios(8), 0.0, TimeWindow(8.0))
        with pytest.raises(ValueError):
            accuracy_threshold(8, dipolar_ratios(8), 1.0, TimeWindow(8.0))
