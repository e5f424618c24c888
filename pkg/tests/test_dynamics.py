import numpy as np
import pytest

from qdarwin.dynamics import (NO_PAIRS_WARNING, GlobalState, ModelConfig, branching_unitary,
                              evolve_branching, initial_state, pointer_coherence, random_pairs,
                              run_model, scattering_step, scattering_unitary, system_state)
from qdarwin.hilbert import DensityOperator, QuantumState
from qdarwin.rng import RandomStream

from oracles import dense_branching_state

S2 = 1 / np.sqrt(2)


def coherence_law(theta, n):
    return 0.5 * abs(np.cos(theta / 2)) ** n


class TestModelConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(n_env=0),
        dict(n_env=2, copy_angle=-0.1),
        dict(n_env=2, copy_angle=3.2),
        dict(n_env=2, scattering_angle=4.0),
        dict(n_env=2, scattering_rounds=-1),
        dict(n_env=2, system_init="minus"),
        dict(n_env=2, system_init=(1, 1)),
        dict(n_env=2, seed=-1),
        dict(n_env=2, seed=2 ** 64),
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            ModelConfig(**kwargs)

    def test_custom_init(self):
        cfg = ModelConfig(n_env=1, system_init=(0.6, 0.8j))
        np.testing.assert_allclose(cfg.system_amplitudes(), [0.6, 0.8j])


class TestBranchingUnitary:
    def test_zero_is_identity(self):
        np.testing.assert_array_equal(branching_unitary(0.0), np.eye(4))

    def test_perfect_copy(self):
        out = branching_unitary(np.pi) @ np.array([0, 0, 1, 0])
        np.testing.assert_allclose(out, [0, 0, 0, 1], atol=1e-15)

    def test_half_copy(self):
        out = branching_unitary(np.pi / 2) @ np.array([0, 0, 1, 0])
        np.testing.assert_allclose(out, [0, 0, S2, S2], atol=1e-15)

    def test_system_zero_untouched(self):
        u = branching_unitary(1.234)
        np.testing.assert_array_equal(u[:2, :2], np.eye(2))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            branching_unitary(4.0)

    def test_unitary_on_random_angles(self):
        for theta in np.random.default_rng(0).uniform(0, np.pi, 100):
            u = branching_unitary(theta)
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12


class TestEvolveBranching:
    def test_ghz3(self):
        psi = evolve_branching(ModelConfig(n_env=2)).state.amplitudes
        expected = np.zeros(8)
        expected[0] = expected[7] = S2
        np.testing.assert_allclose(psi, expected, atol=1e-15)

    def test_no_record(self):
        psi = evolve_branching(ModelConfig(n_env=1, copy_angle=0.0)).state.amplitudes
        np.testing.assert_allclose(psi, [S2, 0, S2, 0], atol=1e-15)

    @pytest.mark.parametrize("n,theta", [(1, 0.7), (3, np.pi / 2), (4, 2.5), (5, np.pi)])
    def test_matches_dense_oracle(self, n, theta):
        psi = evolve_branching(ModelConfig(n_env=n, copy_angle=theta)).state.amplitudes
        np.testing.assert_allclose(psi, dense_branching_state(n, theta), atol=1e-13)

    def test_n4_half_angle_coherence(self):
        gs = evolve_branching(ModelConfig(n_env=4, copy_angle=np.pi / 2))
        assert abs(pointer_coherence(system_state(gs)) - 0.125) < 1e-12
        rho = np.outer(dense_branching_state(4, np.pi / 2), dense_branching_state(4, np.pi / 2).conj())
        off_diag = rho.reshape(2, 16, 2, 16).trace(axis1=1, axis2=3)[0, 1]
        assert abs(abs(off_diag) - 0.125) < 1e-12


class TestPointerCoherence:
    def test_before_interaction(self):
        assert pointer_coherence(system_state(initial_state(ModelConfig(n_env=3)))) == pytest.approx(0.5)

    def test_perfect_records(self):
        gs = evolve_branching(ModelConfig(n_env=1))
        assert pointer_coherence(system_state(gs)) < 1e-12

    def test_half_angle_eight_qubits(self):
        gs = evolve_branching(ModelConfig(n_env=8, copy_angle=np.pi / 2))
        assert abs(pointer_coherence(system_state(gs)) - 0.03125) < 1e-10

    def test_law_on_grid(self):
        for n in range(1, 11):
            for theta in np.linspace(0, np.pi, 20):
                gs = evolve_branching(ModelConfig(n_env=n, copy_angle=theta))
                assert abs(pointer_coherence(system_state(gs)) - coherence_law(theta, n)) < 1e-10

    def test_decays_with_n(self):
        values = [pointer_coherence(system_state(evolve_branching(ModelConfig(n, np.pi / 3))))
                  for n in range(1, 9)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            pointer_coherence(DensityOperator((2, 2), np.eye(4) / 4))


class TestScattering:
    def test_zero_angle_is_identity(self):
        gs = evolve_branching(ModelConfig(n_env=5, copy_angle=1.0))
        out = scattering_step(gs, RandomStream(3))
        np.testing.assert_allclose(out.state.amplitudes, gs.state.amplitudes, atol=1e-15)

    @pytest.mark.parametrize("kind", ["flip", "swap"])
    def test_full_exchange(self, kind):
        cfg = ModelConfig(n_env=2, scattering_angle=np.pi, scattering_kind=kind)
        gs = GlobalState(QuantumState.basis([0, 1, 0]), cfg)
        out = scattering_step(gs, RandomStream(0), pairs=[(1, 2)])
        np.testing.assert_allclose(out.state.amplitudes,
                                   1j * QuantumState.basis([0, 0, 1]).amplitudes, atol=1e-15)

    @pytest.mark.parametrize("kind", ["flip", "swap"])
    def test_unitary(self, kind):
        for alpha in np.linspace(0, np.pi, 7):
            u = scattering_unitary(alpha, kind)
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12

    def test_random_pairs_disjoint(self):
        pairs = random_pairs(9, RandomStream(4, (1, 0)))
        flat = [i for p in pairs for i in p]
        assert len(pairs) == 4
        assert len(set(flat)) == 8
        assert all(1 <= i <= 9 for i in flat)

    def test_system_state_untouched(self):
        cfg = ModelConfig(n_env=6, copy_angle=2.0, scattering_angle=1.1)
        gs = evolve_branching(cfg)
        out = scattering_step(gs, RandomStream(99))
        np.testing.assert_allclose(system_state(out).matrix, system_state(gs).matrix, atol=1e-12)
        assert not np.allclose(out.state.amplitudes, gs.state.amplitudes)

    def test_swap_cannot_scramble_branching_states(self):
        # Branching states are symmetric under exchanging environment qubits,
        # so a partial swap only contributes a global phase.
        cfg = ModelConfig(n_env=6, copy_angle=2.0, scattering_angle=np.pi / 2, scattering_kind="swap")
        gs = evolve_branching(cfg)
        out = scattering_step(gs, RandomStream(1))
        assert abs(abs(np.vdot(gs.state.amplitudes, out.state.amplitudes)) - 1) < 1e-12

    def test_single_env_qubit_warns(self):
        cfg = ModelConfig(n_env=1, scattering_rounds=3, scattering_angle=1.0)
        gs = run_model(cfg)
        assert NO_PAIRS_WARNING in gs.warnings
        assert gs.state == evolve_branching(cfg).state


class TestRunModel:
    def test_no_rounds_equals_branching(self):
        cfg = ModelConfig(n_env=4, copy_angle=1.3, scattering_angle=1.0)
        assert run_model(cfg).state == evolve_branching(cfg).state

    def test_deterministic(self):
        cfg = ModelConfig(n_env=7, copy_angle=2.2, scattering_rounds=4, scattering_angle=0.9, seed=123)
        a, b = run_model(cfg), run_model(cfg)
        assert a.state.amplitudes.tobytes() == b.state.amplitudes.tobytes()

    def test_seed_changes_result(self):
        cfg = dict(n_env=7, copy_angle=np.pi, scattering_rounds=2, scattering_angle=0.9)
        a = run_model(ModelConfig(seed=1, **cfg)).state.amplitudes
        b = run_model(ModelConfig(seed=2, **cfg)).state.amplitudes
        assert not np.array_equal(a, b)

    def test_ghz11(self):
        psi = run_model(ModelConfig(n_env=10)).state.amplitudes
        expected = np.zeros(2 ** 11)
        expected[0] = expected[-1] = S2
        np.testing.assert_allclose(psi, expected, atol=1e-14)

    @pytest.mark.parametrize("n", [2, 5, 8])
    @pytest.mark.parametrize("rounds", [0, 3])
    @pytest.mark.parametrize("kind", ["flip", "swap"])
    def test_norm(self, n, rounds, kind):
        cfg = ModelConfig(n_env=n, copy_angle=1.9, scattering_rounds=rounds,
                          scattering_angle=0.8, scattering_kind=kind, seed=n)
        assert abs(np.linalg.norm(run_model(cfg).state.amplitudes) - 1) < 1e-10
