import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsync.errors import NonDecaying
from qsync.propagator import (
    SERIES_EPS,
    AmplitudeVector,
    EnsembleConfig,
    Regime,
    amplitudes_general,
    collective_factor,
    decay_function,
    decay_roots,
    decay_series,
    derived_rates,
    regime,
    steady_state_h,
)

from conftest import configs, random_configs


# Frozen from the kernel oracle (RK4, dt=1e-4) before trusting the closed form.
H_LAMBDA5_T1 = 0.6503045482818902


def test_config_validation():
    with pytest.raises(ValueError):
        EnsembleConfig(n_qubits=0)
    with pytest.raises(ValueError):
        EnsembleConfig(coupling=0.0)
    with pytest.raises(ValueError):
        EnsembleConfig(spectral_width=-1.0)
    with pytest.raises(ValueError):
        EnsembleConfig(n_qubits=1.5)


class TestDerivedRates:
    def test_markovian_single_qubit(self):
        r = derived_rates(EnsembleConfig(1, 1.0, 5.0, 0.0))
        assert r.d == 5
        assert r.D == pytest.approx(np.sqrt(15), rel=1e-15)
        assert r.D ** 2 == pytest.approx(r.d ** 2 - 10, rel=1e-14)

    def test_non_markovian_single_qubit(self):
        r = derived_rates(EnsembleConfig(1, 1.0, 0.01, 0.0))
        assert r.d == 0.01
        assert r.D.real == pytest.approx(0.0, abs=1e-15)
        assert r.D.imag == pytest.approx(np.sqrt(0.0199), rel=1e-14)
        assert abs(r.D.imag - 0.14107) < 1e-5

    def test_weak_coupling_limit(self):
        r = derived_rates(EnsembleConfig(1, 1e-12, 0.3, 0.7))
        assert abs(r.D - r.d) < 1e-11

    @given(configs)
    def test_square_identity(self, cfg):
        r = derived_rates(cfg)
        target = r.d ** 2 - 2 * cfg.n_qubits * cfg.coupling * cfg.spectral_width
        assert abs(r.D ** 2 - target) <= 1e-13 * max(1.0, abs(target))


class TestDecayFunction:
    @given(configs)
    def test_initial_value_is_exactly_one(self, cfg):
        assert decay_function(cfg, 0.0).h == 1
        assert decay_series(cfg, [0.0])[0] == 1

    def test_markovian_reference_value(self):
        s = decay_function(EnsembleConfig(1, 1.0, 5.0, 0.0), 1.0)
        assert abs(s.h - H_LAMBDA5_T1) < 1e-9
        assert s.h.imag == 0
        # Markov approximation exp(-t/2) within ~10%
        assert abs(s.h.real - np.exp(-0.5)) / np.exp(-0.5) < 0.1

    def test_long_time_limit(self):
        for lam, delta in [(0.01, 0.0), (1.0, 2.0), (5.0, -1.0)]:
            cfg = EnsembleConfig(4, 1.0, lam, delta)
            assert abs(decay_function(cfg, 1e5).h - 0.75) < 1e-9

    def test_negative_time_rejected(self, default_cfg):
        with pytest.raises(ValueError):
            decay_function(default_cfg, -1.0)

    def test_single_qubit_has_no_offset(self):
        cfg = EnsembleConfig(1, 0.7, 0.3, 0.4)
        t = np.linspace(0, 30, 301)
        r = derived_rates(cfg)
        jc = np.exp(-r.d * t / 2) * (np.cosh(r.D * t / 2) + r.d / r.D * np.sinh(r.D * t / 2))
        np.testing.assert_allclose(decay_series(cfg, t), jc, rtol=0, atol=1e-13)

    def test_branch_invariance(self):
        for cfg in random_configs(1000, seed=1):
            r = derived_rates(cfg)
            t = np.array([0.3, 2.0, 17.0, 250.0])
            plus = collective_factor(r.d, r.D, t)
            minus = collective_factor(r.d, -r.D, t)
            scale = np.maximum(np.abs(plus), 1e-300)
            assert np.all(np.abs(plus - minus) <= 1e-12 * scale + 1e-300)

    def test_boundedness_dense_grid(self):
        t = np.linspace(0, 200, 4001)
        for cfg in random_configs(300, seed=2):
            assert np.max(np.abs(decay_series(cfg, t))) <= 1 + 1e-9

    def test_markovian_monotone(self):
        t = np.linspace(0, 40, 2001)
        for n in (1, 2, 5):
            for lam in (2 * n + 0.5, 3 * n, 10.0 * n):
                h = decay_series(EnsembleConfig(n, 1.0, lam, 0.0), t)
                assert np.all(np.diff(np.abs(h)) <= 1e-9)

    def test_series_branch_continuity(self):
        # pick D exactly, then t on either side of the switch-over
        for d in (0.5, 1.0 - 0.3j, 3.0 + 2.0j):
            for D in (1e-3, 2e-4j, 1e-2 * cmath.exp(0.7j)):
                t_switch = SERIES_EPS / abs(D)
                below = collective_factor(d, D, t_switch * (1 - 1e-9))
                above = collective_factor(d, D, t_switch * (1 + 1e-9))
                assert abs(below - above) < 1e-10

    def test_exact_boundary_uses_series(self):
        # lambda = 2 N gamma and Delta = 0 -> D = 0 exactly: h = e^{-dt/2}(1 + dt/2)
        cfg = EnsembleConfig(3, 1.0, 6.0, 0.0)
        assert derived_rates(cfg).D == 0
        t = np.linspace(0, 5, 11)
        expected = 2 / 3 + np.exp(-3 * t) * (1 + 3 * t) / 3
        np.testing.assert_allclose(decay_series(cfg, t).real, expected, rtol=1e-14)

    def test_no_overflow_at_huge_times(self):
        h = decay_series(EnsembleConfig(2, 1.0, 10.0, 0.0), [1e3, 1e6, 1e9])
        assert np.all(np.isfinite(h))
        np.testing.assert_allclose(h, 0.5, atol=1e-12)


class TestAmplitudes:
    def test_single_excitation_matches_h(self):
        cfg = EnsembleConfig(3, 1.0, 0.1, 0.5)
        init = AmplitudeVector.single_excitation(3, amplitude=0.6, c0=0.8)
        for t in (0.0, 1.0, 13.0):
            out = amplitudes_general(cfg, init, t)
            h = decay_function(cfg, t).h
            assert abs(out.c[0] - 0.6 * h) < 1e-14
            assert out.c0 == 0.8

    def test_symmetric_state(self):
        n = 4
        cfg = EnsembleConfig(n, 1.0, 0.05, 1.0)
        init = AmplitudeVector(0, np.full(n, 1 / np.sqrt(n)))
        r = derived_rates(cfg)
        t = 7.0
        factor = np.exp(-r.d * t / 2) * (np.cosh(r.D * t / 2) + r.d / r.D * np.sinh(r.D * t / 2))
        np.testing.assert_allclose(amplitudes_general(cfg, init, t).c, factor / np.sqrt(n), atol=1e-14)

    def test_antisymmetric_pair_is_frozen(self):
        cfg = EnsembleConfig(2, 1.0, 0.01, 0.0)
        init = AmplitudeVector(0, [1 / np.sqrt(2), -1 / np.sqrt(2)])
        for t in (0.5, 100.0, 1e4):
            np.testing.assert_allclose(amplitudes_general(cfg, init, t).c, init.c, atol=1e-15)

    def test_norm_checked(self):
        with pytest.raises(ValueError):
            AmplitudeVector(0.8, [0.8])

    @given(configs, st.floats(0, 100))
    @settings(max_examples=50)
    def test_norm_never_grows(self, cfg, t):
        rng = np.random.default_rng(cfg.n_qubits)
        c = rng.normal(size=cfg.n_qubits) + 1j * rng.normal(size=cfg.n_qubits)
        c *= 0.9 / np.linalg.norm(c)
        out = amplitudes_general(cfg, AmplitudeVector(0.1, c), t)
        assert abs(out.c0) ** 2 + np.sum(np.abs(out.c) ** 2) <= 1 + 1e-9


class TestRegime:
    @pytest.mark.parametrize("n, lam, expected", [
        (1, 5.0, Regime.MARKOVIAN),
        (1, 0.01, Regime.NON_MARKOVIAN),
        (3, 6.0, Regime.BOUNDARY),
        (3, 6.0 + 1e-9, Regime.MARKOVIAN),
        (8, 5.0, Regime.NON_MARKOVIAN),
    ])
    def test_classification(self, n, lam, expected):
        assert regime(EnsembleConfig(n, 1.0, lam, 0.0)) is expected


class TestSteadyState:
    @pytest.mark.parametrize("n, expected", [(1, 0.0), (2, 0.5), (10, 0.9)])
    def test_values(self, n, expected):
        assert steady_state_h(EnsembleConfig(n, 1.0, 0.3, 0.2)) == pytest.approx(expected)

    def test_slow_detuned_roots_still_decay(self):
        cfg = EnsembleConfig(1, 1.0, 0.01, 2.0)
        slow, fast = decay_roots(cfg)
        assert -2e-5 < slow.real < -1e-5
        assert fast.real == pytest.approx(-0.01, rel=2e-3)
        assert steady_state_h(cfg) == 0

    def test_roots_match_rates(self):
        cfg = EnsembleConfig(3, 0.8, 0.4, 1.3)
        r = derived_rates(cfg)
        roots = sorted(decay_roots(cfg), key=lambda z: z.real)
        expected = sorted([(-r.d + r.D) / 2, (-r.d - r.D) / 2], key=lambda z: z.real)
        np.testing.assert_allclose(roots, expected, rtol=1e-12)

    def test_far_detuned_root_keeps_sign(self):
        slow, _ = decay_roots(EnsembleConfig(1, 1.0, 1e-6, 1e6))
        assert slow.real < 0

    def test_non_decaying_signalled(self, monkeypatch):
        import qsync.propagator as prop
        monkeypatch.setattr(prop, "decay_roots", lambda cfg: (0j, -1 + 0j))
        with pytest.raises(NonDecaying):
            prop.steady_state_h(EnsembleConfig())
