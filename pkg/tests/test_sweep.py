import io
import json

import numpy as np
import pytest

from stirap_gates import (
    ConfigurationError,
    GridSpec,
    IntegratorConfig,
    SweepConfig,
    initial_state_vector,
    run_sweep,
    sweep_config_from_json,
    sweep_config_to_json,
    sweep_rows_to_csv,
)
from stirap_gates.pulses import CzPulseParams

FAST = IntegratorConfig(step=0.04)


def small_config(initial="uniform", workers=1, points=2):
    return SweepConfig(
        kappa_grid=GridSpec(0.0, 0.1, points),
        gamma_grid=GridSpec(0.0, 0.1, points),
        initial=initial,
        integrator=FAST,
        workers=workers,
    )


class TestGridSpec:
    def test_values(self):
        assert np.allclose(GridSpec(0.0, 0.2, 5).values(), [0, 0.05, 0.1, 0.15, 0.2])
        assert GridSpec(0.07, 0.07, 1).values().tolist() == [0.07]

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            GridSpec(points=0)
        with pytest.raises(ConfigurationError):
            GridSpec(-0.1, 0.2, 3)
        with pytest.raises(ConfigurationError):
            GridSpec(0.3, 0.2, 3)


class TestInitialStateVector:
    def test_named_selectors(self, comp_states):
        uniform = initial_state_vector("uniform")
        assert all(
            uniform.amplitude(s) == pytest.approx(0.5) for s in comp_states
        )
        assert initial_state_vector("010").amplitude(comp_states[1]) == 1.0
        assert initial_state_vector("000").amplitude(comp_states[0]) == 1.0

    def test_custom_amplitudes_normalized(self, comp_states):
        psi = initial_state_vector([2.0, 0.0, 0.0, 2.0j])
        assert psi.norm_sq == pytest.approx(1.0)
        assert psi.amplitude(comp_states[0]) == pytest.approx(1 / np.sqrt(2))

    def test_rejects_garbage(self):
        with pytest.raises(ConfigurationError):
            initial_state_vector("mystery")
        with pytest.raises(ConfigurationError):
            initial_state_vector([1.0, 0.0])
        with pytest.raises(ConfigurationError):
            initial_state_vector([0.0, 0.0, 0.0, 0.0])


class TestRunSweep:
    def test_row_order_is_gamma_major(self):
        rows = run_sweep(small_config(points=2))
        coords = [(r.kappa, r.gamma) for r in rows]
        assert coords == [(0.0, 0.0), (0.1, 0.0), (0.0, 0.1), (0.1, 0.1)]

    def test_no_dissipation_point_is_lossless(self):
        rows = run_sweep(small_config(points=2))
        origin = rows[0]
        assert origin.p_suc == pytest.approx(1.0, abs=1e-6)
        assert origin.error is None

    def test_headline_point(self):
        cfg = SweepConfig(
            kappa_grid=GridSpec(0.1, 0.1, 1),
            gamma_grid=GridSpec(0.1, 0.1, 1),
            initial="uniform",
        )
        rows = run_sweep(cfg)
        assert len(rows) == 1
        assert rows[0].p_suc == pytest.approx(0.8455, abs=1e-3)
        assert rows[0].fidelity == pytest.approx(0.9912, abs=1e-3)

    def test_superposition_dominates_min_component(self):
        p_uniform = {
            (r.kappa, r.gamma): r.p_suc for r in run_sweep(small_config("uniform"))
        }
        p_010 = {(r.kappa, r.gamma): r.p_suc for r in run_sweep(small_config("010"))}
        p_000 = {(r.kappa, r.gamma): r.p_suc for r in run_sweep(small_config("000"))}
        for point, value in p_uniform.items():
            assert value >= min(p_010[point], p_000[point]) - 1e-12

    def test_worker_count_does_not_change_bytes(self):
        rows_serial = run_sweep(small_config(workers=1))
        rows_parallel = run_sweep(small_config(workers=2))
        buf_a, buf_b = io.StringIO(), io.StringIO()
        sweep_rows_to_csv(rows_serial, buf_a)
        sweep_rows_to_csv(rows_parallel, buf_b)
        assert buf_a.getvalue() == buf_b.getvalue()

    def test_marked_route_monotone_in_both_rates(self):
        cfg = SweepConfig(
            kappa_grid=GridSpec(0.0, 0.2, 3),
            gamma_grid=GridSpec(0.0, 0.2, 3),
            initial="010",
        )
        table = {(r.kappa, r.gamma): r.p_suc for r in run_sweep(cfg)}
        kappas = sorted({k for k, _ in table})
        gammas = sorted({g for _, g in table})
        for kappa in kappas:
            col = [table[(kappa, g)] for g in gammas]
            assert all(a >= b - 1e-12 for a, b in zip(col, col[1:]))
        for gamma in gammas:
            row = [table[(k, gamma)] for k in kappas]
            assert all(a >= b - 1e-12 for a, b in zip(row, row[1:]))


def test_csv_format():
    rows = run_sweep(small_config(points=2))
    buf = io.StringIO()
    sweep_rows_to_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "kappa_over_g,gamma_over_g,p_suc,fidelity"
    assert len(lines) == 5
    for line in lines[1:]:
        kappa, gamma, p_suc, fidelity = map(float, line.split(","))
        assert 0 <= p_suc <= 1
        assert 0 <= fidelity <= 1


class TestConfigJson:
    def test_roundtrip_named_initial(self):
        cfg = SweepConfig(
            kappa_grid=GridSpec(0.0, 0.15, 4),
            gamma_grid=GridSpec(0.05, 0.2, 7),
            initial="010",
            pulses=CzPulseParams(omega_max=0.2, T=180.0, t0=25.0, tau=35.0),
            integrator=IntegratorConfig(step=0.01),
        )
        parsed = sweep_config_from_json(sweep_config_to_json(cfg))
        assert parsed.kappa_grid == cfg.kappa_grid
        assert parsed.gamma_grid == cfg.gamma_grid
        assert parsed.initial == cfg.initial
        assert parsed.pulses == cfg.pulses
        assert parsed.integrator.step == cfg.integrator.step

    def test_custom_amplitudes_roundtrip(self):
        cfg = SweepConfig(initial=(0.5 + 0j, 0.5j, -0.5 + 0j, 0.5 + 0j))
        parsed = sweep_config_from_json(sweep_config_to_json(cfg))
        assert parsed.initial == cfg.initial

    def test_defaults_fill_missing_sections(self):
        parsed = sweep_config_from_json("{}")
        assert parsed.kappa_grid == GridSpec(0.0, 0.2, 41)
        assert parsed.gamma_grid == GridSpec(0.0, 0.2, 41)
        assert parsed.initial == "uniform"

    def test_schema_example(self):
        doc = {
            "kappa_grid": {"min": 0, "max": 0.1, "points": 3},
            "gamma_grid": {"min": 0, "max": 0.1, "points": 3},
            "initial": {"amplitudes": [[0.5, 0], [0.5, 0], [0.5, 0], [0.5, 0]]},
            "pulses": {"omega_max": 0.16, "T": 200, "t0": 30, "tau": 40},
            "integrator": {"step": 0.02},
        }
        cfg = sweep_config_from_json(json.dumps(doc))
        assert cfg.kappa_grid.points == 3
        assert cfg.initial == (0.5 + 0j, 0.5 + 0j, 0.5 + 0j, 0.5 + 0j)

    def test_malformed_rejected(self):
        with pytest.raises(ConfigurationError):
            sweep_config_from_json('{"kappa_grid": {"min": 0}}')
        with pytest.raises(ConfigurationError):
            sweep_config_from_json('{"initial": {"amplitudes": ["x", 1, 2, 3]}}')
