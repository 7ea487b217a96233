import numpy as np
import pytest

from qsync.phase_space import SphereGrid
from qsync.propagator import EnsembleConfig
from qsync.sweep import (
    AxisSpec,
    SweepResult,
    bloch_series,
    husimi_snapshots,
    time_series_S,
    tongue_delta_coupling,
    tongue_delta_lambda,
)

# Frozen from the kernel oracle (RK4, dt=1e-3) at t=1000, N=1, lambda=0.01, gamma=1.
S_MAX_RESONANT = 1.8667274048930697e-4
S_MAX_DETUNED_2 = 0.12329930303631935

NON_MARKOV = EnsembleConfig(1, 1.0, 0.01, 0.0)


class TestAxisSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            AxisSpec("delta", 1.0, 0.0, 5)
        with pytest.raises(ValueError):
            AxisSpec("delta", 0.0, 1.0, 1)
        with pytest.raises(ValueError):
            AxisSpec("lambda", 0.0, 1.0, 5, "log")
        with pytest.raises(ValueError):
            AxisSpec("omega", 0.0, 1.0, 5)

    def test_parse_round_trip(self):
        axis = AxisSpec("lambda", 0.001, 0.1, 7, "log")
        assert AxisSpec.parse(axis.to_text()) == axis
        assert AxisSpec.parse("delta:-2:2:5") == AxisSpec("delta", -2.0, 2.0, 5)

    @pytest.mark.parametrize("scale", ["linear", "log"])
    def test_refinement_shares_points_exactly(self, scale):
        coarse = AxisSpec("lambda", 0.001, 0.1, 11, scale).values()
        fine = AxisSpec("lambda", 0.001, 0.1, 21, scale).values()
        np.testing.assert_array_equal(fine[::2], coarse)


class TestTongues:
    def test_detuning_beats_resonance(self):
        r = tongue_delta_coupling(NON_MARKOV, AxisSpec("delta", 0.0, 2.0, 3), AxisSpec("coupling", 0.5, 1.0, 2))
        resonant, detuned = r.cell(0, 1), r.cell(2, 1)
        assert resonant < detuned
        assert resonant == pytest.approx(S_MAX_RESONANT, rel=1e-6)
        assert detuned == pytest.approx(S_MAX_DETUNED_2, rel=1e-6)

    def test_shape_and_order(self):
        r = tongue_delta_coupling(NON_MARKOV, AxisSpec("delta", -1.0, 1.0, 2), AxisSpec("coupling", 0.5, 1.5, 2))
        assert r.values.shape == (2, 2)
        assert np.all(np.isfinite(r.values))
        # y outer, x inner
        from qsync.phase_space import s_max
        from qsync.propagator import decay_function
        from qsync.qubit import DEFAULT_INIT
        for j, g in enumerate((0.5, 1.5)):
            for i, delta in enumerate((-1.0, 1.0)):
                cfg = NON_MARKOV.replace(coupling=g, detuning=delta)
                assert r.cell(i, j) == pytest.approx(s_max(DEFAULT_INIT, decay_function(cfg, 1000).h).s_max,
                                                     rel=1e-12)

    def test_single_cell_reduces_to_config(self):
        r = tongue_delta_lambda(EnsembleConfig(3), AxisSpec("delta", 0.5, 0.6, 2), AxisSpec("lambda", 0.02, 0.03, 2))
        from qsync.propagator import decay_function
        h = decay_function(EnsembleConfig(3, 1.0, 0.02, 0.5), 1000).h
        assert r.cell(0, 0) == pytest.approx(abs(h) / 8, rel=1e-12)

    def test_triangular_dark_region_single_qubit(self):
        r = tongue_delta_lambda(NON_MARKOV, AxisSpec("delta", -2, 2, 81), AxisSpec("lambda", 0.001, 0.1, 21))
        deltas = r.x_axis.values()
        widths = []
        for row in r.values:
            dark = deltas[row < 0.0625]
            widths.append(np.ptp(dark) if dark.size else 0.0)
            if dark.size:
                # dark band is centred on resonance
                assert dark.min() == pytest.approx(-dark.max())
                assert np.all(row[np.abs(deltas) < dark.max()] < 0.0625)
        assert widths[0] == 0.0
        assert widths[-1] == pytest.approx(4.0)
        assert np.all(np.diff(widths) >= 0)

    def test_symmetric_in_detuning(self):
        r = tongue_delta_coupling(EnsembleConfig(3), AxisSpec("delta", -2, 2, 21), AxisSpec("coupling", 0.1, 2, 5))
        np.testing.assert_allclose(r.values, r.values[:, ::-1], rtol=1e-10, atol=1e-15)

    def test_mean_grows_with_n(self):
        means = [tongue_delta_lambda(EnsembleConfig(n), AxisSpec("delta", -2, 2, 51),
                                     AxisSpec("lambda", 0.001, 0.1, 51)).values.mean() for n in (1, 3, 6, 10)]
        assert np.all(np.diff(means) > 0)

    def test_refinement_reproduces_cells(self):
        coarse = tongue_delta_lambda(EnsembleConfig(3), AxisSpec("delta", -2, 2, 11), AxisSpec("lambda", 0.001, 0.1, 6))
        fine = tongue_delta_lambda(EnsembleConfig(3), AxisSpec("delta", -2, 2, 21), AxisSpec("lambda", 0.001, 0.1, 11))
        np.testing.assert_array_equal(fine.values[::2, ::2], coarse.values)

    def test_deterministic(self):
        a = tongue_delta_coupling(EnsembleConfig(6), AxisSpec("delta", -2, 2, 31), AxisSpec("coupling", 0.01, 2, 31))
        b = tongue_delta_coupling(EnsembleConfig(6), AxisSpec("delta", -2, 2, 31), AxisSpec("coupling", 0.01, 2, 31))
        assert a.values.tobytes() == b.values.tobytes()
        assert a.metadata == b.metadata

    def test_finite_over_documented_bounds(self):
        for n in (1, 15):
            r = tongue_delta_coupling(EnsembleConfig(n, 1.0, 1e-3), AxisSpec("delta", -10, 10, 41),
                                      AxisSpec("coupling", 1e-3, 10, 41, "log"), t_snapshot=1e5)
            assert np.all(np.isfinite(r.values))
        # exact regime boundary, D = 0 cell
        r = tongue_delta_lambda(EnsembleConfig(3), AxisSpec("delta", 0.0, 1.0, 2), AxisSpec("lambda", 6.0, 7.0, 2))
        assert np.all(np.isfinite(r.values))

    def test_bad_axes(self):
        with pytest.raises(ValueError):
            tongue_delta_coupling(NON_MARKOV, AxisSpec("lambda", 0, 1, 2), AxisSpec("coupling", 0.1, 1, 2))
        with pytest.raises(ValueError):
            tongue_delta_coupling(NON_MARKOV, AxisSpec("delta", 0, 1, 2), AxisSpec("coupling", 0.1, 1, 2), 0.0)

    def test_non_finite_rejected(self):
        with pytest.raises(FloatingPointError):
            SweepResult("x", AxisSpec("delta", 0, 1, 2), None, NON_MARKOV, [0.0, np.nan])


class TestTimeSeries:
    def test_damped_oscillation_at_resonance(self):
        r = time_series_S(NON_MARKOV, AxisSpec("time", 0, 1500, 15001))
        s = r.values[0]
        assert s[0] == pytest.approx(0.125)
        assert np.count_nonzero(np.diff(np.sign(s[np.abs(s) > 1e-12])) != 0) >= 3
        assert np.max(np.abs(s[r.x_axis.values() > 1200])) < 1e-3

    def test_three_qubit_plateau(self):
        r = time_series_S(EnsembleConfig(3, 1.0, 0.01, 1.0), AxisSpec("time", 0, 1e5, 1001))
        assert abs(r.values[0, -1] - 1 / 12) < 1e-3

    @pytest.mark.parametrize("delta", [0.5, 1.0, 2.0])
    def test_no_sign_change_after_transient(self, delta):
        t = AxisSpec("time", 0, 3000, 3001)
        s = time_series_S(EnsembleConfig(6, 1.0, 0.01, delta), t).values[0]
        assert np.all(s > 0)

    def test_transient_lengthens_with_detuning(self):
        t = AxisSpec("time", 0, 20000, 20001)
        settle = []
        for delta in (0.5, 1.0, 2.0):
            s = time_series_S(EnsembleConfig(6, 1.0, 0.01, delta), t).values[0]
            far = np.abs(s - 5 / 48) > 1e-3
            settle.append(t.values()[np.nonzero(far)[0][-1]])
        assert settle[0] < settle[1] < settle[2]

    def test_phi_shift(self):
        a = time_series_S(NON_MARKOV, AxisSpec("time", 0, 10, 11), phi=np.pi).values
        b = time_series_S(NON_MARKOV, AxisSpec("time", 0, 10, 11)).values
        np.testing.assert_allclose(a, -b, atol=1e-15)


class TestHusimiSnapshots:
    GRID = SphereGrid.uniform(61, 120)

    def test_initial_peak_and_normalization(self):
        surfaces = husimi_snapshots(NON_MARKOV, [0.0, 50.0, 500.0], self.GRID)
        assert surfaces[0].argmax() == pytest.approx((np.pi / 2, 0.0), abs=1e-12)
        for s in surfaces:
            assert abs(s.integral() - 1) < 1e-6

    def test_markovian_phase_uniformization(self):
        late = husimi_snapshots(EnsembleConfig(1, 1.0, 5.0, 0.0), [40.0], self.GRID)[0]
        phase_contrast = np.ptp(late.values, axis=1).max()
        assert phase_contrast < 1e-3 / np.pi

    def test_markovian_auxiliary_qubits_keep_phase(self):
        # decoherence-free part survives even with a memoryless reservoir
        late = husimi_snapshots(EnsembleConfig(2, 1.0, 5.0, 1.0), [40.0], self.GRID)[0]
        assert np.ptp(late.values, axis=1).max() == pytest.approx(0.25 / np.pi, rel=1e-2)

    def test_detuned_pair_comparable_to_resonant_eight(self):
        grid = self.GRID
        pair = husimi_snapshots(EnsembleConfig(2, 1.0, 0.01, 1.0), [1e4], grid)[0]
        eight = husimi_snapshots(EnsembleConfig(8, 1.0, 0.01, 0.0), [1e4], grid)[0]
        c_pair = np.ptp(pair.values, axis=1).max()
        c_eight = np.ptp(eight.values, axis=1).max()
        assert c_pair > 0.1 / np.pi
        assert 0.5 < c_pair / c_eight < 1.0


def test_bloch_series_endpoints():
    traj = bloch_series(EnsembleConfig(10))
    np.testing.assert_array_equal(traj.components[0], [1.0, 0.0, 0.0])
    assert traj.times[-1] == 1200.0
    assert traj.components[-1, 0] == pytest.approx(0.9, abs=5e-3)
