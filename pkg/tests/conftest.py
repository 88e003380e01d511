"""Shared fixtures: canonical objects plus the expensive propagations that
several test modules reuse."""

import numpy as np
import pytest

from stirap_gates import (
    IntegratorConfig,
    StateVector,
    SystemParams,
    canonical_gate_basis,
    cz_schedule,
    propagate,
)
from stirap_gates.propagator import computational_states


@pytest.fixture(scope="session")
def basis():
    return canonical_gate_basis()


@pytest.fixture(scope="session")
def comp_states():
    """The computational product states in order 00, 01, 10, 11."""
    return computational_states()


@pytest.fixture(scope="session")
def default_schedule():
    return cz_schedule()


@pytest.fixture(scope="session")
def uniform_state(basis, comp_states):
    return StateVector.from_components(basis, {s: 0.5 for s in comp_states})


@pytest.fixture(scope="session")
def headline_trajectory(default_schedule, uniform_state):
    """Uniform superposition at kappa = Gamma = 0.1 g under default pulses."""
    return propagate(
        default_schedule, SystemParams(1.0, 0.1, 0.1), uniform_state, IntegratorConfig()
    )


@pytest.fixture(scope="session")
def expm_oracle_deviation(basis, comp_states, eq_matrix_literal):
    """Distance between the RK4 propagator and an independent brute-force
    stepper (hand-transcribed matrix, frozen exponentials on sub-steps of
    h/10) on a shortened schedule.  Shared because the oracle is slow.
    Returns (final-state distance, |P_suc difference|).
    """
    import math

    from scipy.linalg import expm

    from stirap_gates import StateVector as SV

    schedule = cz_schedule(omega_max=0.16, T=40.0, t0=10.0, tau=10.0)
    params = SystemParams(1.0, 0.08, 0.05)
    cfg = IntegratorConfig(step=0.05)
    psi0 = SV.from_components(basis, {s: 0.5 for s in comp_states})
    traj = propagate(schedule, params, psi0, cfg)

    n_steps = int(round(schedule.span / cfg.step))
    dt = cfg.step / 10.0
    amp, tau = 0.16, 10.0
    centers_sigma = ((-30.0, 1.0), (30.0, -1.0))
    centers_01 = ((-10.0, 1.0), (10.0, 1.0))

    def envelope(t, centers):
        return sum(
            sign * amp * math.exp(-((t - c) ** 2) / (2 * tau**2))
            for c, sign in centers
        )

    y = psi0.amplitudes.copy()
    t = schedule.t_start
    for _ in range(n_steps * 10):
        tm = t + 0.5 * dt
        h_matrix = eq_matrix_literal(
            envelope(tm, centers_01),
            envelope(tm, centers_sigma),
            1.0,
            params.kappa,
            params.gamma,
        )
        y = expm(-1j * h_matrix * dt) @ y
        t += dt
    distance = float(np.linalg.norm(traj.states[-1] - y))
    p_diff = abs(traj.final_norm_sq - float(np.vdot(y, y).real))
    return distance, p_diff


@pytest.fixture(scope="session")
def eq_matrix_literal():
    """Hand-transcribed conditional Hamiltonian on the canonical basis, kept
    independent of the production builder.  Valid for real drives and real g.
    """

    def build(omega_01, omega_sigma2, g, kappa, gamma):
        m = np.zeros((10, 10), dtype=complex)
        m[0, 1] = omega_01
        m[1, 0] = omega_01
        m[1, 1] = -0.5j * gamma
        m[1, 2] = g
        m[2, 1] = g
        m[2, 2] = -0.5j * kappa
        m[2, 3] = g
        m[3, 2] = g
        m[3, 3] = -0.5j * gamma
        m[3, 4] = omega_sigma2
        m[4, 3] = omega_sigma2
        m[5, 6] = omega_01
        m[6, 5] = omega_01
        m[6, 6] = -0.5j * gamma
        m[6, 7] = g
        m[7, 6] = g
        m[7, 7] = -0.5j * kappa
        return m

    return build
