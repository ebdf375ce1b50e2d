"""Hamiltonian construction, diagonalization, and the propagation basis."""

import numpy as np
import pytest

from dqdpulse.errors import (
    ContractViolationError,
    DegeneracyError,
    InvalidParameterError,
)
from dqdpulse.hybrid_model import (
    DIPOLE_DIAGONAL,
    HybridParams,
    build_hamiltonian,
    build_model_basis,
    eigendecompose,
    energy_spectrum_sweep,
)

from _oracles import char_poly_eigenvalues, planck_energy


class TestBuildHamiltonian:
    def test_diagonal_at_eps_100(self, params):
        h = build_hamiltonian(params, 100.0)
        assert h[0, 0] == pytest.approx(50.0)
        assert h[2, 2] == pytest.approx(-50.0)

    def test_off_diagonals_at_zero_detuning(self, params):
        h = build_hamiltonian(params, 0.0)
        assert h[0, 2] == pytest.approx(planck_energy(2.62), rel=1e-9)
        assert h[0, 2] == pytest.approx(10.835, abs=2e-3)
        assert h[0, 3] == pytest.approx(-planck_energy(3.50), rel=1e-9)
        assert h[0, 3] == pytest.approx(-14.475, abs=2e-3)

    def test_level_splittings_on_diagonal(self, params):
        h = build_hamiltonian(params, 0.0)
        assert h[1, 1] - h[0, 0] == pytest.approx(planck_energy(52.7), rel=1e-9)
        assert h[3, 3] - h[2, 2] == pytest.approx(planck_energy(9.2), rel=1e-9)

    def test_real_symmetric_for_random_detunings(self, params, rng):
        for eps in rng.uniform(-500, 500, size=1000):
            h = build_hamiltonian(params, eps)
            assert np.abs(h - h.T).max() < 1e-12
            assert np.isrealobj(h)

    def test_linear_in_detuning(self, params, rng):
        h0 = build_hamiltonian(params, 0.0)
        off = ~DIPOLE_DIAGONAL.astype(bool)
        for eps in rng.uniform(-300, 300, size=20):
            h = build_hamiltonian(params, eps)
            # off-diagonal block is bit-identical; the diagonal carries
            # exactly the +-eps/2 detuning on top of the splittings
            assert np.array_equal(h[off], h0[off])
            assert h[0, 0] == eps / 2 and h[2, 2] == -eps / 2
            assert h[1, 1] == eps / 2 + h0[1, 1]
            assert h[3, 3] == -eps / 2 + h0[3, 3]

    def test_rejects_non_finite(self, params):
        with pytest.raises(InvalidParameterError):
            build_hamiltonian(params, float("inf"))
        with pytest.raises(InvalidParameterError):
            HybridParams(delta1=float("nan"))


class TestEigendecompose:
    def test_diagonal_matrix(self):
        w, v = eigendecompose(np.diag([3.0, 1.0, 2.0, 0.0]))
        assert np.allclose(w, [0, 1, 2, 3])
        # columns are a permutation of the identity basis
        assert np.allclose(np.abs(v), np.eye(4)[:, [3, 1, 2, 0]])

    def test_against_characteristic_polynomial(self, params):
        h = build_hamiltonian(params, params.eps0)
        w, _ = eigendecompose(h)
        assert np.abs(w - char_poly_eigenvalues(h)).max() < 1e-8

    def test_residual_for_random_symmetric(self, rng):
        for _ in range(50):
            a = rng.normal(size=(4, 4))
            h = (a + a.T) / 2
            w, v = eigendecompose(h)
            assert np.abs(h @ v - v * w).max() < 1e-10
            assert np.all(np.diff(w) >= 0)

    def test_sign_convention_deterministic(self, rng):
        a = rng.normal(size=(4, 4))
        h = (a + a.T) / 2
        _, v = eigendecompose(h)
        for col in v.T:
            assert col[np.argmax(np.abs(col))] > 0

    def test_rejects_non_hermitian(self):
        m = np.eye(4)
        m[0, 1] = 1e-6
        with pytest.raises(ContractViolationError):
            eigendecompose(m)


class TestModelBasis:
    def test_known_spectrum_at_reference_detuning(self, model):
        # the four working-point energies and the three transition gaps
        assert np.allclose(model.h0_diag, [-28.818, 4.471, 35.844, 244.500], atol=1e-3)
        gaps_ghz = np.diff(model.h0_diag) / (2 * np.pi * 0.6582119569)
        assert np.allclose(gaps_ghz, [8.049, 7.586, 50.453], atol=1e-3)

    def test_orthogonality(self, model):
        assert np.abs(model.z.T @ model.z - np.eye(4)).max() < 1e-12

    def test_diagonalization_residual(self, params, model):
        h = build_hamiltonian(params, params.eps0)
        assert np.abs(model.z.T @ h @ model.z - np.diag(model.h0_diag)).max() < 1e-10

    def test_dipole_spectrum_and_trace(self, model):
        w = np.linalg.eigvalsh(model.mu)
        assert np.allclose(w, [-0.5, -0.5, 0.5, 0.5], atol=1e-12)
        assert abs(np.trace(model.mu)) < 1e-12
        assert np.abs(model.mu - model.mu.T).max() < 1e-12
        w2 = np.linalg.eigvalsh(model.mu @ model.mu)
        assert np.allclose(w2, 0.25, atol=1e-12)

    def test_basis_consistency_identity(self, params, model, rng):
        # Z^T H(eps) Z = diag(h0) + (eps - eps0) * mu, the identity the
        # propagator relies on
        for eps in rng.uniform(-500, 500, size=25):
            lhs = model.z.T @ build_hamiltonian(params, eps) @ model.z
            rhs = np.diag(model.h0_diag) + (eps - params.eps0) * model.mu
            assert np.abs(lhs - rhs).max() < 1e-10

    def test_label_map(self, model):
        # ground state carries logical label |2>, first excited |1>,
        # remaining levels keep energy order
        assert model.label_map[1] == 0
        assert model.label_map[0] == 1
        assert model.label_map[2] == 2
        assert model.label_map[3] == 3
        assert sorted(model.label_map) == [0, 1, 2, 3]

    def test_logical_state(self, model):
        psi = model.logical_state(2)
        assert psi[0] == 1.0 and np.linalg.norm(psi) == 1.0
        with pytest.raises(InvalidParameterError):
            model.logical_state(0)

    def test_field_sign_flips_dipole(self, params):
        plus = build_model_basis(params, field_sign=1)
        minus = build_model_basis(params, field_sign=-1)
        assert np.array_equal(plus.mu, -minus.mu)
        with pytest.raises(InvalidParameterError):
            build_model_basis(params, field_sign=0.5)

    def test_degenerate_spectrum_rejected(self):
        # no tunneling and matched splittings collapse level pairs
        degenerate = HybridParams(delta1=0, delta2=0, delta3=0, delta4=0,
                                  delta_el=10.0, delta_er=10.0, eps0=0.0)
        with pytest.raises(DegeneracyError):
            build_model_basis(degenerate)


class TestEnergySpectrumSweep:
    def test_asymptotic_branches(self, params):
        table = energy_spectrum_sweep(params, -2000.0, 2000.0, 3)
        at_high = table[-1, 1:]
        # the two dot branches approach +-eps/2 within 1 percent; the other
        # two carry the splitting offsets on top
        assert abs(at_high[0] - (-1000.0)) / 1000.0 < 0.01
        assert abs(at_high[2] - 1000.0) / 1000.0 < 0.01

    def test_rows_ordered_and_levels_ascending(self, params):
        table = energy_spectrum_sweep(params, -100.0, 100.0, 41)
        assert np.all(np.diff(table[:, 0]) > 0)
        assert np.all(np.diff(table[:, 1:], axis=1) >= 0)

    def test_minimum_gap_positive(self, params):
        # paper-set spectrum has avoided crossings only
        table = energy_spectrum_sweep(params, -500.0, 500.0, 2001)
        gaps = np.diff(table[:, 1:], axis=1)
        assert gaps.min() > 0.1

    def test_single_point_matches_model_basis(self, params, model):
        table = energy_spectrum_sweep(params, params.eps0, params.eps0, 1)
        assert np.allclose(table[0, 1:], model.h0_diag, atol=1e-12)

    def test_parameter_validation(self, params):
        with pytest.raises(InvalidParameterError):
            energy_spectrum_sweep(params, 10.0, -10.0, 5)
        with pytest.raises(InvalidParameterError):
            energy_spectrum_sweep(params, 0.0, 1.0, 0)
        with pytest.raises(InvalidParameterError):
            energy_spectrum_sweep(params, 0.0, 1.0, 1)
