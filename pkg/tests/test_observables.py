import numpy as np
import pytest

from ntqw import (
    ObservableSeries,
    WalkerState,
    ensemble_average,
    fit_power_law,
    long_time_average,
    new_state,
    participation,
    return_probability,
    sample_times,
    site_density,
    step,
)


def state_from_densities(site_probs):
    """Walker state carrying the given site probabilities in the a
    component only."""
    p = np.asarray(site_probs, dtype=float)
    a = np.sqrt(p).astype(complex)
    return WalkerState(a, np.zeros_like(a), len(p) // 2)


def series(times, r0, pr, snapshots=None):
    return ObservableSeries(
        np.asarray(times), np.asarray(r0, float), np.asarray(pr, float), snapshots
    )


class TestSiteDensity:
    def test_initial_state_is_a_delta(self):
        dens = site_density(new_state(9, 4))
        assert dens[4] == pytest.approx(1.0)
        assert np.count_nonzero(dens) == 1

    def test_sums_to_one_during_a_walk(self):
        st = new_state(101, 50)
        for _ in range(40):
            step(st, 0.45, 1.2)
            assert site_density(st).sum() == pytest.approx(1.0, abs=1e-10)

    def test_combines_both_components(self):
        a = np.zeros(5, complex)
        b = np.zeros(5, complex)
        a[2] = 0.6
        b[2] = 0.8j
        dens = site_density(WalkerState(a, b, 2))
        assert dens[2] == pytest.approx(1.0)


class TestReturnProbability:
    def test_one_at_start(self):
        assert return_probability(new_state(5, 2)) == pytest.approx(1.0)

    def test_zero_after_first_step(self):
        st = new_state(7, 3)
        step(st, 0.7, 0.9)
        assert return_probability(st) == 0.0

    def test_matches_density_at_origin(self):
        st = new_state(31, 15)
        for _ in range(10):
            step(st, 0.3, np.pi / 4)
        assert return_probability(st) == pytest.approx(
            site_density(st)[15], abs=1e-15
        )


class TestParticipation:
    def test_delta_profile(self):
        assert participation(state_from_densities([0, 0, 1, 0, 0])) == pytest.approx(1.0)

    def test_uniform_profile(self):
        m = 8
        probs = np.zeros(10)
        probs[1 : 1 + m] = 1.0 / m
        assert participation(state_from_densities(probs)) == pytest.approx(m)

    def test_two_equal_peaks(self):
        assert participation(
            state_from_densities([0.5, 0, 0, 0, 0.5])
        ) == pytest.approx(2.0)

    def test_bounds_during_a_walk(self):
        st = new_state(101, 50)
        for t in range(1, 41):
            step(st, 0.8, 1.0)
            pr = participation(st)
            populated = st.hi - st.lo + 1
            assert 1.0 - 1e-12 <= pr <= populated + 1e-9


class TestSeriesValidation:
    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            series([0, 2], [1.0], [1.0, 2.0])

    def test_times_must_increase(self):
        with pytest.raises(ValueError, match="increasing"):
            series([0, 2, 2], [1, 1, 1], [1, 1, 1])

    def test_r0_bounds(self):
        with pytest.raises(ValueError, match="r0"):
            series([0, 2], [0.5, 1.5], [1, 1])

    def test_pr_floor(self):
        with pytest.raises(ValueError, match="pr"):
            series([0, 2], [0.5, 0.5], [1.0, 0.5])


class TestLongTimeAverage:
    def test_constant_series(self):
        s = series([0, 10, 20, 30], [0.5] * 4, [2.0] * 4)
        r0_bar, pr_bar = long_time_average(s, 0.1)
        assert r0_bar == 0.5
        assert pr_bar == 2.0

    def test_windows_only_the_tail(self):
        times = np.arange(0, 101, 2)
        r0 = times / 200.0
        s = series(times, r0, np.full_like(r0, 2.0))
        r0_bar, _ = long_time_average(s, 0.1)
        expected = r0[times >= 90].mean()
        assert r0_bar == pytest.approx(expected)

    def test_full_fraction_uses_everything(self):
        s = series([0, 2, 4], [0.0, 0.5, 1.0], [1, 2, 3])
        r0_bar, pr_bar = long_time_average(s, 1.0)
        assert r0_bar == pytest.approx(0.5)
        assert pr_bar == pytest.approx(2.0)

    def test_bad_fraction(self):
        s = series([0, 2], [0.5, 0.5], [1, 1])
        for f in (0.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                long_time_average(s, f)

    def test_empty_series(self):
        s = series([], [], [])
        with pytest.raises(ValueError):
            long_time_average(s, 0.1)


class TestPowerLawFit:
    def test_recovers_planted_decay(self):
        t = np.arange(2, 400, 2, dtype=float)
        fit = fit_power_law(t, t**-1.0, (2, 400))
        assert fit.exponent == pytest.approx(-1.0, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_recovers_planted_growth_with_prefactor(self):
        t = np.arange(2, 1000, 2, dtype=float)
        fit = fit_power_law(t, 3.0 * t**0.52, (10, 900))
        assert fit.exponent == pytest.approx(0.52, abs=1e-12)
        assert fit.intercept == pytest.approx(np.log(3.0), abs=1e-10)

    def test_window_restricts_the_fit(self):
        t = np.arange(1, 101, dtype=float)
        v = np.where(t < 50, t**-2.0, t**-2.0)  # pure law, any window agrees
        full = fit_power_law(t, v, (1, 100))
        late = fit_power_law(t, v, (50, 100))
        assert full.exponent == pytest.approx(late.exponent, abs=1e-10)
        assert late.fit_window == (50.0, 100.0)

    def test_too_few_points(self):
        with pytest.raises(ValueError, match="need >= 3"):
            fit_power_law([1, 2, 3, 4], [1, 1, 1, 1], (3, 4))

    def test_nonpositive_values_rejected(self):
        t = np.array([2.0, 4.0, 6.0, 8.0])
        with pytest.raises(ValueError, match="nonpositive"):
            fit_power_law(t, [1.0, 0.0, 1.0, 1.0], (2, 8))

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError, match="window"):
            fit_power_law([1, 2, 3], [1, 1, 1], (5, 5))

    def test_constant_series_has_unit_r_squared(self):
        # ss_tot = 0: the flat line explains everything
        fit = fit_power_law([2, 4, 8], [3.0, 3.0, 3.0], (2, 8))
        assert fit.exponent == pytest.approx(0.0, abs=1e-12)
        assert fit.r_squared == 1.0


class TestEnsembleAverage:
    def test_single_member_identity(self):
        s = series([0, 2, 4], [1.0, 0.5, 0.25], [1.0, 2.0, 4.0])
        avg = ensemble_average([s])
        assert np.array_equal(avg.times, s.times)
        assert np.allclose(avg.r0, s.r0)
        assert np.allclose(avg.pr, s.pr)

    def test_two_member_mean(self):
        s1 = series([0, 2], [0.0, 0.0], [1.0, 1.0])
        s2 = series([0, 2], [1.0, 1.0], [3.0, 3.0])
        avg = ensemble_average([s1, s2])
        assert np.allclose(avg.r0, 0.5)
        assert np.allclose(avg.pr, 2.0)

    def test_mismatched_grids_rejected(self):
        s1 = series([0, 2], [0.5, 0.5], [1, 1])
        s2 = series([0, 4], [0.5, 0.5], [1, 1])
        with pytest.raises(ValueError, match="grids"):
            ensemble_average([s1, s2])

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            ensemble_average([])

    def test_snapshots_averaged_per_site(self):
        snap1 = [(2, np.array([1.0, 0.0]))]
        snap2 = [(2, np.array([0.0, 1.0]))]
        s1 = series([0, 2], [0.5, 0.5], [1, 1], snap1)
        s2 = series([0, 2], [0.5, 0.5], [1, 1], snap2)
        avg = ensemble_average([s1, s2])
        t, dens = avg.snapshots[0]
        assert t == 2
        assert np.allclose(dens, [0.5, 0.5])

    def test_mixed_snapshot_presence_rejected(self):
        s1 = series([0, 2], [0.5, 0.5], [1, 1], [(2, np.array([1.0]))])
        s2 = series([0, 2], [0.5, 0.5], [1, 1])
        with pytest.raises(ValueError, match="snapshots"):
            ensemble_average([s1, s2])


class TestSampleTimes:
    def test_even_unique_sorted(self):
        ts = sample_times(10_000, 100)
        body = ts[1:] if ts[0] == 0 else ts
        assert np.all(body % 2 == 0)
        assert np.all(np.diff(ts) > 0)
        assert body[0] >= 2
        assert body[-1] <= 10_000

    def test_zero_prepended_on_request(self):
        assert sample_times(100, 10)[0] == 0
        assert sample_times(100, 10, include_zero=False)[0] >= 2

    def test_covers_the_last_even_step(self):
        assert sample_times(10_000, 400)[-1] == 10_000
        assert sample_times(101, 50)[-1] == 100

    def test_tiny_horizon(self):
        ts = sample_times(2, 5)
        assert list(ts) == [0, 2]

    def test_requesting_more_points_than_available_dedupes(self):
        ts = sample_times(20, 500)
        assert list(ts) == [0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20]

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            sample_times(0, 10)
        with pytest.raises(ValueError):
            sample_times(100, 0)
