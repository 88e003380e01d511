"""Built-in invariant suite behind the ``verify`` CLI subcommand.

These are self-contained structural and physical checks that need no
external reference data: basis round trips, Hamiltonian symmetries, dark
states, pulse-schedule discipline, propagator conservation laws and the
truth table of the undamped gate.  They run in a few seconds and are meant
as an install-time smoke test; the full statistical test suite lives in
the package's pytest tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gates import (
    TARGET_LABELS,
    grover_search,
    hadamard_pair,
    ideal_gate_matrix,
    run_cz_01,
)
from .hamiltonian import SystemParams, build_conditional, build_hermitian, dark_states
from .propagator import (
    IntegratorConfig,
    computational_states,
    convergence_report,
    propagate,
)
from .pulses import cz_schedule, drives_at
from .states import (
    StateVector,
    canonical_gate_basis,
    inner_product,
    single_atom_basis,
)

__all__ = ["CheckResult", "run_all_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _check_basis_roundtrip() -> CheckResult:
    for basis in (canonical_gate_basis(), single_atom_basis()):
        for i, state in enumerate(basis):
            if basis.index_of(state) != i or basis[i] != state:
                return CheckResult("basis-roundtrip", False, f"index {i} broken")
    return CheckResult("basis-roundtrip", True)


def _check_inner_product() -> CheckResult:
    rng = np.random.default_rng(11)
    basis = canonical_gate_basis()
    for _ in range(20):
        a = StateVector(basis, rng.normal(size=10) + 1j * rng.normal(size=10))
        b = StateVector(basis, rng.normal(size=10) + 1j * rng.normal(size=10))
        if abs(inner_product(a, b) - np.conj(inner_product(b, a))) > 1e-12:
            return CheckResult("inner-product-conjugate", False)
        norm = inner_product(a, a)
        if abs(norm.imag) > 1e-12 or abs(norm.real - a.norm_sq) > 1e-9:
            return CheckResult("inner-product-conjugate", False, "norm mismatch")
    return CheckResult("inner-product-conjugate", True)


def _check_hamiltonian_structure() -> CheckResult:
    rng = np.random.default_rng(23)
    basis = canonical_gate_basis()
    for _ in range(20):
        drives = {
            "omega_01": rng.uniform(0, 1),
            "omega_sigma2": rng.uniform(0, 1),
        }
        params = SystemParams(1.0, rng.uniform(0, 0.3), rng.uniform(0, 0.3))
        herm = build_hermitian(drives, params.g, basis).matrix
        if np.max(np.abs(herm - herm.conj().T)) > 1e-14:
            return CheckResult("hamiltonian-structure", False, "not Hermitian")
        cond = build_conditional(drives, params, basis).matrix
        anti = (cond - cond.conj().T) / 2.0
        off_diag = anti - np.diag(np.diag(anti))
        if np.max(np.abs(off_diag)) > 1e-14:
            return CheckResult(
                "hamiltonian-structure", False, "anti-Hermitian part not diagonal"
            )
        if np.max(np.diag(anti).imag) > 0.0 + 1e-15:
            return CheckResult(
                "hamiltonian-structure", False, "decay diagonal has a positive rate"
            )
        if np.max(np.abs(cond[8:, :])) > 0 or np.max(np.abs(cond[:, 8:])) > 0:
            return CheckResult(
                "hamiltonian-structure", False, "decoupled rows touched"
            )
    return CheckResult("hamiltonian-structure", True)


def _check_dark_states() -> CheckResult:
    rng = np.random.default_rng(37)
    basis = canonical_gate_basis()
    worst = 0.0
    for _ in range(50):
        o1 = rng.uniform(0.01, 1.0)
        o2 = rng.uniform(0.01, 1.0)
        herm = build_hermitian({"omega_01": o1, "omega_sigma2": o2}, 1.0, basis).matrix
        for dark in dark_states(o1, o2, 1.0):
            worst = max(worst, float(np.linalg.norm(herm @ dark.amplitudes)))
    passed = worst < 1e-12
    return CheckResult("dark-states-null", passed, f"worst residual {worst:.2e}")


def _check_norm_decay_generator() -> CheckResult:
    rng = np.random.default_rng(41)
    basis = canonical_gate_basis()
    for _ in range(50):
        drives = {"omega_01": rng.uniform(0, 1), "omega_sigma2": rng.uniform(0, 1)}
        params = SystemParams(1.0, rng.uniform(0, 0.3), rng.uniform(0, 0.3))
        cond = build_conditional(drives, params, basis).matrix
        v = rng.normal(size=10) + 1j * rng.normal(size=10)
        if np.vdot(v, cond @ v).imag > 1e-12 * np.vdot(v, v).real:
            return CheckResult("norm-decay-generator", False)
    return CheckResult("norm-decay-generator", True)


def _check_schedule_discipline() -> CheckResult:
    sched = cz_schedule()
    phases_ok = all(
        abs(p.phase) < 1e-12 or abs(p.phase - math.pi) < 1e-12 for p in sched.pulses
    )
    centers = sorted(p.center for p in sched.pulses)
    mirror_ok = all(
        abs(centers[i] + centers[-1 - i]) < 1e-9 for i in range(len(centers))
    )
    # counterintuitive order within stage (i)
    stage1 = {p.drive: p.center for p in sched.pulses if p.center < 0}
    order_ok = stage1["omega_sigma2"] < stage1["omega_01"]
    tail = max(abs(v) for v in drives_at(sched, sched.t_end + 100.0).values())
    passed = phases_ok and mirror_ok and order_ok and tail < 1e-6
    return CheckResult("schedule-discipline", passed)


def _check_propagation_laws() -> CheckResult:
    basis = canonical_gate_basis()
    comp = computational_states()
    sched = cz_schedule(T=60.0, t0=12.0, tau=15.0)  # reduced window for speed
    cfg = IntegratorConfig()
    params = SystemParams(1.0, 0.1, 0.1)
    psi = StateVector.from_components(basis, {s: 0.5 for s in comp})
    traj = propagate(sched, params, psi, cfg)
    if np.any(np.diff(traj.norms_sq) > 1e-12):
        return CheckResult("propagation-laws", False, "P_suc not monotone")
    # unitarity without decay
    traj0 = propagate(sched, SystemParams(1.0, 0.0, 0.0), psi, cfg)
    if abs(traj0.final_norm_sq - 1.0) > 1e-8:
        return CheckResult("propagation-laws", False, "norm not conserved at k=G=0")
    # decoupled state is an exact fixed point
    fixed = StateVector.basis_state(basis, comp[3])
    trajf = propagate(sched, params, fixed, cfg)
    if np.max(np.abs(trajf.states[-1] - fixed.amplitudes)) > 1e-12:
        return CheckResult("propagation-laws", False, "|1,1,0> moved")
    # linearity
    a, b = 0.8, 0.6
    s1 = StateVector.basis_state(basis, comp[1])
    s2 = StateVector.basis_state(basis, comp[0])
    mix = StateVector(basis, a * s1.amplitudes + b * s2.amplitudes)
    fin_mix = propagate(sched, params, mix, cfg).states[-1]
    fin_sep = (
        a * propagate(sched, params, s1, cfg).states[-1]
        + b * propagate(sched, params, s2, cfg).states[-1]
    )
    if np.linalg.norm(fin_mix - fin_sep) > 1e-10:
        return CheckResult("propagation-laws", False, "propagator not linear")
    report = convergence_report(sched, params, psi, cfg)
    if not report.passed:
        return CheckResult(
            "propagation-laws", False, f"step halving moved P_suc by {report.delta_p_suc:.2e}"
        )
    return CheckResult("propagation-laws", True)


def _check_truth_table() -> CheckResult:
    basis = canonical_gate_basis()
    params = SystemParams(1.0, 0.0, 0.0)
    expected_signs = (1.0, -1.0, 1.0, 1.0)
    for state, sign in zip(computational_states(), expected_signs):
        psi0 = StateVector.basis_state(basis, state)
        result = run_cz_01(psi0, params)
        amp = result.final_state.amplitude(state)
        if result.fidelity < 0.999 or amp.real * sign < 0:
            return CheckResult(
                "cz-truth-table", False, f"input {state}: F={result.fidelity:.5f}"
            )
    return CheckResult("cz-truth-table", True)


def _check_grover_ideal() -> CheckResult:
    hadamard = hadamard_pair()
    for target in TARGET_LABELS:
        # independent brute-force product of the five 4x4 stages
        vec = np.zeros(4)
        vec[0] = 1.0
        product = hadamard @ ideal_gate_matrix("00") @ hadamard @ ideal_gate_matrix(
            target
        ) @ hadamard
        expected = np.abs(product @ vec) ** 2
        got = grover_search(target, SystemParams(1.0, 0.0, 0.0), mode="ideal")
        for i, label in enumerate(TARGET_LABELS):
            if abs(got.probabilities[label] - expected[i]) > 1e-12:
                return CheckResult("grover-ideal", False, f"target {target}")
        if abs(got.probabilities[target] - 1.0) > 1e-12:
            return CheckResult("grover-ideal", False, f"target {target} not certain")
    return CheckResult("grover-ideal", True)


_CHECKS: tuple[Callable[[], CheckResult], ...] = (
    _check_basis_roundtrip,
    _check_inner_product,
    _check_hamiltonian_structure,
    _check_dark_states,
    _check_norm_decay_generator,
    _check_schedule_discipline,
    _check_propagation_laws,
    _check_truth_table,
    _check_grover_ideal,
)


def run_all_checks() -> list[CheckResult]:
    """Execute every invariant check, capturing exceptions as failures."""
    results = []
    for check in _CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashed check is a failed check
            results.append(CheckResult(check.__name__.strip("_"), False, repr(exc)))
    return results
