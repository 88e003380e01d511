import numpy as np
import pytest

from stirap_gates import (
    AtomLevel,
    BasisState,
    ConfigurationError,
    DegenerateDarkSpaceError,
    SystemParams,
    build_conditional,
    build_hermitian,
    cz_schedule,
    dark_states,
    single_atom_basis,
)
from stirap_gates.hamiltonian import decay_vector, format_matrix
from stirap_gates.pulses import drives_at


def test_system_params_validation():
    with pytest.raises(ConfigurationError):
        SystemParams(g=0.0)
    with pytest.raises(ConfigurationError):
        SystemParams(g=1.0, kappa=-0.1)
    with pytest.raises(ConfigurationError):
        SystemParams(g=1.0, gamma=-0.1)


class TestConditionalMatrix:
    def test_matches_literal_transcription(self, basis, eq_matrix_literal):
        rng = np.random.default_rng(101)
        for _ in range(100):
            o1, o2 = rng.uniform(0, 1, size=2)
            kappa, gamma = rng.uniform(0, 0.5, size=2)
            got = build_conditional(
                {"omega_01": o1, "omega_sigma2": o2},
                SystemParams(1.0, kappa, gamma),
                basis,
            ).matrix
            expected = eq_matrix_literal(o1, o2, 1.0, kappa, gamma)
            assert np.array_equal(got, expected)

    def test_zero_drives_leave_only_cavity_couplings(self, basis):
        h = build_conditional({}, SystemParams(1.0, 0.0, 0.0), basis).matrix
        expected_entries = {(1, 2), (2, 1), (2, 3), (3, 2), (6, 7), (7, 6)}
        nz = {tuple(map(int, rc)) for rc in np.argwhere(np.abs(h) > 0)}
        assert nz == expected_entries
        assert all(h[rc] == 1.0 for rc in expected_entries)

    def test_decay_diagonal_pattern(self, basis):
        h = build_conditional({}, SystemParams(1.0, 0.1, 0.1), basis).matrix
        expected = -0.05j * np.array([0, 1, 1, 1, 0, 0, 1, 1, 0, 0])
        assert np.array_equal(np.diag(h), expected)

    def test_decoupled_rows_identically_zero(self, basis):
        rng = np.random.default_rng(5)
        for _ in range(10):
            h = build_conditional(
                {"omega_01": rng.uniform(0, 2), "omega_sigma2": rng.uniform(0, 2)},
                SystemParams(1.0, rng.uniform(0, 1), rng.uniform(0, 1)),
                basis,
            ).matrix
            assert np.all(h[8:, :] == 0)
            assert np.all(h[:, 8:] == 0)

    def test_norm_decay_generator_is_negative_semidefinite(self, basis):
        rng = np.random.default_rng(6)
        for _ in range(100):
            h = build_conditional(
                {"omega_01": rng.uniform(0, 1), "omega_sigma2": rng.uniform(0, 1)},
                SystemParams(1.0, rng.uniform(0, 0.4), rng.uniform(0, 0.4)),
                basis,
            ).matrix
            v = rng.normal(size=10) + 1j * rng.normal(size=10)
            assert np.vdot(v, h @ v).imag <= 1e-12 * np.vdot(v, v).real

    def test_lossless_state_has_zero_decay(self, basis):
        h = build_conditional({}, SystemParams(1.0, 0.3, 0.7), basis).matrix
        # a state with no photons and no excited atoms keeps its norm
        v = np.zeros(10, dtype=complex)
        for idx in (0, 4, 5, 8, 9):
            v[idx] = 1.0
        v /= np.linalg.norm(v)
        assert np.vdot(v, h @ v).imag == pytest.approx(0.0, abs=1e-15)


class TestHermitianBuilder:
    def test_equals_conditional_without_decay(self, basis):
        drives = {"omega_01": 0.4, "omega_sigma2": 0.9}
        herm = build_hermitian(drives, 1.0, basis).matrix
        cond = build_conditional(drives, SystemParams(1.0, 0.0, 0.0), basis).matrix
        assert np.array_equal(herm, cond)

    def test_hermitian_for_real_drives(self, basis):
        herm = build_hermitian({"omega_01": 0.3, "omega_sigma2": 0.8}, 1.0, basis).matrix
        assert np.array_equal(herm, herm.conj().T)

    def test_hermitian_for_complex_drives(self, basis):
        herm = build_hermitian(
            {"omega_01": 0.3 + 0.1j, "omega_sigma2": 0.8 - 0.4j}, 1.0, basis
        ).matrix
        assert np.allclose(herm, herm.conj().T)

    def test_not_subspace_matrix(self):
        sb = single_atom_basis()
        herm = build_hermitian(
            {"not_0": 0.5, "not_1": 0.7, "not_sigma": 0.9}, 1.0, sb
        ).matrix
        expected = np.zeros((4, 4), dtype=complex)
        expected[3, 0] = expected[0, 3] = 0.5
        expected[3, 1] = expected[1, 3] = 0.7
        expected[3, 2] = expected[2, 3] = 0.9
        assert np.array_equal(herm, expected)

    def test_not_subspace_decay_sits_on_level_3(self):
        sb = single_atom_basis()
        rates = decay_vector(SystemParams(1.0, 0.3, 0.8), sb)
        assert np.array_equal(rates, [0.0, 0.0, 0.0, 0.4])

    def test_drive_on_wrong_basis_kind_rejected(self, basis):
        with pytest.raises(ConfigurationError, match="single atom"):
            build_hermitian({"not_0": 0.5}, 1.0, basis)
        with pytest.raises(ConfigurationError, match="product"):
            build_hermitian({"omega_01": 0.5}, 1.0, single_atom_basis())

    def test_unknown_drive_rejected(self, basis):
        with pytest.raises(ConfigurationError, match="unknown drive"):
            build_hermitian({"mystery": 1.0}, 1.0, basis)


class TestDarkStates:
    def test_pump_off_limits(self, basis):
        d00, d01 = dark_states(0.0, 0.7, 1.0)
        assert d00.amplitude(BasisState(AtomLevel.ZERO, AtomLevel.ZERO, 0)) == pytest.approx(1.0)
        assert d01.amplitude(BasisState(AtomLevel.ZERO, AtomLevel.ONE, 0)) == pytest.approx(1.0)

    def test_equal_drives_d00(self, basis):
        d00, _ = dark_states(1.0, 1.0, 1.0)
        s = 1 / np.sqrt(2)
        assert d00.amplitude(BasisState(AtomLevel.ZERO, AtomLevel.ZERO, 0)) == pytest.approx(s)
        assert d00.amplitude(BasisState(AtomLevel.ONE, AtomLevel.ZERO, 1)) == pytest.approx(-s)

    def test_null_space_of_hermitian_builder(self, basis):
        rng = np.random.default_rng(17)
        for _ in range(100):
            o1, o2 = rng.uniform(0.01, 1.5, size=2)
            herm = build_hermitian(
                {"omega_01": o1, "omega_sigma2": o2}, 1.0, basis
            ).matrix
            for dark in dark_states(o1, o2, 1.0):
                assert np.linalg.norm(herm @ dark.amplitudes) < 1e-12
                assert dark.norm_sq == pytest.approx(1.0)

    def test_exactly_two_zero_eigenvalues_on_coupled_block(self, basis):
        rng = np.random.default_rng(19)
        for _ in range(100):
            o1, o2 = rng.uniform(0.05, 1.5, size=2)
            herm = build_hermitian(
                {"omega_01": o1, "omega_sigma2": o2}, 1.0, basis
            ).matrix
            eigenvalues = np.linalg.eigvalsh(herm[:8, :8])
            assert np.sum(np.abs(eigenvalues) < 1e-10) == 2

    def test_sign_convention_first_amplitude_positive(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            o1 = rng.uniform(0.05, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            o2 = rng.uniform(0.05, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            for dark in dark_states(o1, o2, 1.0):
                leading = next(a for a in dark.amplitudes if abs(a) > 1e-12)
                assert leading.real > 0
                assert abs(leading.imag) < 1e-12

    def test_both_drives_zero_rejected(self):
        with pytest.raises(DegenerateDarkSpaceError):
            dark_states(0.0, 0.0, 1.0)

    def test_continuity_along_schedule_stage(self, basis):
        # within stage (i) both envelopes stay positive, so the fixed-sign
        # representatives must move slowly (a sign flip would jump by ~2)
        sched = cz_schedule()
        times = np.arange(-250.0, -10.0, 1.0)
        previous = None
        for t in times:
            values = drives_at(sched, float(t))
            d00, d01 = dark_states(values["omega_01"], values["omega_sigma2"], 1.0)
            if previous is not None:
                assert np.linalg.norm(d00.amplitudes - previous[0].amplitudes) < 0.05
                assert np.linalg.norm(d01.amplitudes - previous[1].amplitudes) < 0.05
            previous = (d00, d01)


def test_format_matrix_contains_all_entries(basis):
    ham = build_conditional(
        {"omega_01": 0.25}, SystemParams(1.0, 0.1, 0.0), basis, time=1.5
    )
    text = format_matrix(ham)
    assert "# t = 1.5" in text
    assert len(text.splitlines()) == 11  # header + ten rows
    assert "+2.500000e-01" in text
    assert "-5.000000e-02j" in text
