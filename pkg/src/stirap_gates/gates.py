"""Named gate executions: the four conditional phase gates, the single-atom
NOT, ideal reference matrices, and the two-qubit Grover search.

The base gate flips the sign of |0>_1|1>_2; the other three targets are
obtained by conjugating it with NOT gates on one or both atoms.  In
``simulated`` mode those NOTs are themselves propagated in the single-atom
four-level space and embedded back into the two-atom register; in ``ideal``
mode they are exact bit flips.  Hadamards are always ideal: the register
single-qubit rotations are outside the scope of this simulator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Optional, Sequence

import numpy as np

from .errors import TotalDecayError
from .hamiltonian import SystemParams
from .propagator import (
    GateDiagnostics,
    GateResult,
    IntegratorConfig,
    computational_states,
    fidelity_to_ideal,
    propagate,
)
from .pulses import (
    CzPulseParams,
    NotPulseParams,
    PulseSchedule,
    cz_schedule,
    not_schedule,
)
from .states import (
    AtomLevel,
    StateVector,
    canonical_gate_basis,
    normalize,
    single_atom_basis,
    state_label,
)

__all__ = [
    "TARGET_LABELS",
    "GateSpec",
    "GroverResult",
    "ideal_gate_matrix",
    "hadamard_pair",
    "qubit_amplitudes",
    "state_from_qubit_amplitudes",
    "run_cz_01",
    "run_conditional_phase",
    "run_not",
    "grover_search",
    "gate_result_to_json",
]

#: The four two-qubit computational labels, in basis order.
TARGET_LABELS = ("00", "01", "10", "11")

#: Which atoms get a NOT on both sides of the base gate to relabel the
#: target: 00 differs from 01 in atom 2, 11 in atom 1, 10 in both.
_CONJUGATION_FLIPS = {"01": (), "00": (2,), "11": (1,), "10": (1, 2)}

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def _check_target(target: str) -> str:
    if target not in TARGET_LABELS:
        raise ValueError(f"target must be one of {TARGET_LABELS}, got {target!r}")
    return target


def ideal_gate_matrix(target: str) -> np.ndarray:
    """Reflection I - 2|target><target| on the basis (00, 01, 10, 11)."""
    _check_target(target)
    matrix = np.eye(4)
    matrix[TARGET_LABELS.index(target), TARGET_LABELS.index(target)] = -1.0
    return matrix


def hadamard_pair() -> np.ndarray:
    """Ideal Hadamard on both qubits, H (x) H, on the (00, 01, 10, 11) basis."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    return np.kron(h, h)


@dataclass(frozen=True)
class GateSpec:
    """Declarative description of one gate: kind, target, pulse knobs and
    whether supporting NOTs are propagated or idealized."""

    kind: str  # "conditional-phase" | "not" | "ideal-hadamard"
    target: Optional[str] = None
    mode: str = "ideal"  # "ideal" | "simulated"
    cz_pulses: CzPulseParams = CzPulseParams()
    not_pulses: NotPulseParams = NotPulseParams()

    def __post_init__(self) -> None:
        if self.kind not in ("conditional-phase", "not", "ideal-hadamard"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.mode not in ("ideal", "simulated"):
            raise ValueError(f"unknown execution mode {self.mode!r}")
        if self.kind == "ideal-hadamard" and self.mode != "ideal":
            raise ValueError("the Hadamard is only available as an ideal matrix")
        if self.kind == "conditional-phase":
            _check_target(self.target)

    def ideal_matrix(self) -> np.ndarray:
        """The exact 4x4 matrix of this gate on the computational basis."""
        if self.kind == "conditional-phase":
            return ideal_gate_matrix(self.target)
        if self.kind == "ideal-hadamard":
            return hadamard_pair()
        raise ValueError("the NOT gate acts on a single atom, not the register")

    def run(
        self,
        psi0: StateVector,
        params: SystemParams,
        cfg: Optional[IntegratorConfig] = None,
    ) -> GateResult:
        """Execute the described gate on ``psi0``."""
        if self.kind == "conditional-phase":
            return run_conditional_phase(
                self.target,
                psi0,
                params,
                cfg,
                mode=self.mode,
                cz_pulses=self.cz_pulses.schedule(),
                not_pulses=self.not_pulses.schedule(),
            )
        if self.kind == "not":
            return run_not(psi0, params.gamma, cfg, schedule=self.not_pulses.schedule())
        raise ValueError("the ideal Hadamard is a matrix, not a propagated gate")


def _qubit_indices() -> list[int]:
    basis = canonical_gate_basis()
    return [basis.index_of(s) for s in computational_states()]


def qubit_amplitudes(state: StateVector) -> np.ndarray:
    """Amplitudes on (00, 01, 10, 11); any weight elsewhere is ignored."""
    return state.amplitudes[_qubit_indices()].copy()


def state_from_qubit_amplitudes(amps: Sequence[complex]) -> StateVector:
    """Embed a 4-vector of computational amplitudes into the gate basis."""
    amps = np.asarray(amps, dtype=np.complex128)
    if amps.shape != (4,):
        raise ValueError("expected four computational amplitudes")
    full = np.zeros(len(canonical_gate_basis()), dtype=np.complex128)
    full[_qubit_indices()] = amps
    return StateVector(canonical_gate_basis(), full)


def _apply_qubit_map(amplitudes: np.ndarray, atom: int, m2: np.ndarray) -> np.ndarray:
    """Apply a single-atom 2x2 map on the computational components of a
    10-dim amplitude array; weight outside the qubit (x) vacuum subspace is
    dropped (treated as heralded loss)."""
    idx = _qubit_indices()
    block = amplitudes[idx].reshape(2, 2)  # [atom1 bit, atom2 bit]
    if atom == 1:
        block = m2 @ block
    elif atom == 2:
        block = block @ m2.T
    else:
        raise ValueError(f"atom index must be 1 or 2, got {atom}")
    out = np.zeros_like(amplitudes)
    out[idx] = block.reshape(4)
    return out


def _simulated_not_map(
    gamma: float,
    schedule: PulseSchedule,
    cfg: IntegratorConfig,
) -> tuple[np.ndarray, GateDiagnostics]:
    """Sub-unitary 2x2 map of the propagated NOT on the {|0>, |1>} span.

    Amplitude ending on |s> or |3> is discarded, so the map's deficiency
    from unitarity shows up as heralded loss when it is embedded.
    """
    from .propagator import _propagate_block  # internal fast path

    basis = single_atom_basis()
    block = np.zeros((4, 2), dtype=np.complex128)
    block[basis.index_of(AtomLevel.ZERO), 0] = 1.0
    block[basis.index_of(AtomLevel.ONE), 1] = 1.0
    params = SystemParams(g=1.0, kappa=0.0, gamma=gamma)
    _, samples = _propagate_block(schedule, params, basis, block, cfg)
    i0 = basis.index_of(AtomLevel.ZERO)
    i1 = basis.index_of(AtomLevel.ONE)
    i3 = basis.index_of(AtomLevel.EXCITED3)
    final = samples[-1]
    not_map = np.array(
        [[final[i0, 0], final[i0, 1]], [final[i1, 0], final[i1, 1]]]
    )
    max_excited = float(np.max(np.abs(samples[:, i3, :]) ** 2))
    return not_map, GateDiagnostics(0.0, max_excited)


def _merge_diagnostics(parts: Sequence[GateDiagnostics]) -> GateDiagnostics:
    return GateDiagnostics(
        max_photon_population=max((p.max_photon_population for p in parts), default=0.0),
        max_excited_population=max((p.max_excited_population for p in parts), default=0.0),
    )


def _require_qubit_support(psi0: StateVector) -> None:
    leak = psi0.norm_sq - float(np.sum(np.abs(qubit_amplitudes(psi0)) ** 2))
    if leak > 1e-9:
        raise ValueError(
            f"initial state has weight {leak:.3g} outside the qubit (x) vacuum span"
        )


def run_cz_01(
    psi0: StateVector,
    params: SystemParams,
    cfg: Optional[IntegratorConfig] = None,
    schedule: Optional[PulseSchedule] = None,
) -> GateResult:
    """Propagate the two-STIRAP conditional phase gate on |0>_1|1>_2.

    ``psi0`` must be a unit state on the qubit (x) vacuum span of the
    canonical basis.  Fidelity is measured against the ideal reflection
    diag(1, -1, 1, 1).
    """
    _require_qubit_support(psi0)
    cfg = cfg or IntegratorConfig()
    schedule = schedule or cz_schedule()
    traj = propagate(schedule, params, psi0, cfg)
    final_normalized, p_suc = normalize(traj.final_state)
    fidelity = fidelity_to_ideal(final_normalized, ideal_gate_matrix("01"), psi0)
    diagnostics = GateDiagnostics(
        traj.max_photon_population(), traj.max_excited_population()
    )
    return GateResult(p_suc, fidelity, final_normalized, diagnostics)


def run_conditional_phase(
    target: str,
    psi0: StateVector,
    params: SystemParams,
    cfg: Optional[IntegratorConfig] = None,
    mode: str = "ideal",
    cz_pulses: Optional[PulseSchedule] = None,
    not_pulses: Optional[PulseSchedule] = None,
) -> GateResult:
    """Conditional phase gate on any computational target.

    Targets other than 01 are produced by sandwiching the base gate
    between NOTs on the atoms whose labels differ from 01.  ``mode``
    selects whether those NOTs are ideal bit flips or full single-atom
    simulations (the base gate is always propagated).  For target 01 the
    result is identical to :func:`run_cz_01`.
    """
    _check_target(target)
    if mode not in ("ideal", "simulated"):
        raise ValueError(f"unknown execution mode {mode!r}")
    _require_qubit_support(psi0)
    cfg = cfg or IntegratorConfig()
    cz_pulses = cz_pulses or cz_schedule()
    flips = _CONJUGATION_FLIPS[target]
    diagnostics_parts: list[GateDiagnostics] = []

    if flips and mode == "simulated":
        not_pulses = not_pulses or not_schedule()
        flip_map, not_diag = _simulated_not_map(params.gamma, not_pulses, cfg)
        diagnostics_parts.append(not_diag)
    else:
        flip_map = _SIGMA_X

    amps = psi0.amplitudes.copy()
    for atom in flips:
        amps = _apply_qubit_map(amps, atom, flip_map)
    p_pre = float(np.vdot(amps, amps).real)
    if p_pre <= 0.0:
        raise TotalDecayError("state fully decayed in the pre-gate NOTs")

    basis = psi0.basis
    traj = propagate(
        cz_pulses, params, StateVector(basis, amps / math.sqrt(p_pre)), cfg
    )
    diagnostics_parts.append(
        GateDiagnostics(traj.max_photon_population(), traj.max_excited_population())
    )

    post = traj.states[-1].copy()
    for atom in flips:
        post = _apply_qubit_map(post, atom, flip_map)
    p_suc = p_pre * float(np.vdot(post, post).real)
    if p_suc <= 0.0:
        raise TotalDecayError("state fully decayed during the gate")
    final_normalized, _ = normalize(StateVector(basis, post))
    fidelity = fidelity_to_ideal(final_normalized, ideal_gate_matrix(target), psi0)
    return GateResult(
        p_suc, fidelity, final_normalized, _merge_diagnostics(diagnostics_parts)
    )


def run_not(
    psi0: StateVector,
    gamma: float,
    cfg: Optional[IntegratorConfig] = None,
    schedule: Optional[PulseSchedule] = None,
) -> GateResult:
    """Propagate the three-STIRAP NOT gate on one atom.

    ``psi0`` lives in the four-level single-atom basis and must be
    supported on {|0>, |1>}.  Fidelity is against the exact bit flip.
    """
    qubit_weight = sum(
        abs(psi0.amplitude(level)) ** 2 for level in (AtomLevel.ZERO, AtomLevel.ONE)
    )
    if psi0.norm_sq - qubit_weight > 1e-9:
        raise ValueError("initial state has weight outside the {|0>, |1>} span")
    cfg = cfg or IntegratorConfig()
    schedule = schedule or not_schedule()
    params = SystemParams(g=1.0, kappa=0.0, gamma=gamma)
    traj = propagate(schedule, params, psi0, cfg)
    final_normalized, p_suc = normalize(traj.final_state)
    fidelity = fidelity_to_ideal(
        final_normalized, _SIGMA_X, psi0, (AtomLevel.ZERO, AtomLevel.ONE)
    )
    diagnostics = GateDiagnostics(0.0, traj.max_excited_population())
    return GateResult(p_suc, fidelity, final_normalized, diagnostics)


@dataclass(frozen=True)
class GroverResult:
    """Outcome distribution of the single-iteration two-qubit search."""

    target: str
    mode: str
    probabilities: dict[str, float]
    success_probability: float  # cumulative no-jump probability (1 in ideal mode)

    @property
    def best(self) -> str:
        return max(self.probabilities, key=self.probabilities.get)


def grover_search(
    target: str,
    params: SystemParams,
    cfg: Optional[IntegratorConfig] = None,
    mode: str = "ideal",
    cz_pulses: Optional[PulseSchedule] = None,
    not_pulses: Optional[PulseSchedule] = None,
) -> GroverResult:
    """One Grover iteration on |00>: H(x)H, mark ``target``, H(x)H, mark 00,
    H(x)H.

    With two qubits a single iteration finds the marked item with
    certainty, so ideal mode returns probability 1 on ``target``.  In
    simulated mode both reflections run through
    :func:`run_conditional_phase` (with simulated NOT conjugations), each
    output is renormalized before the next stage, and the product of the
    stage success probabilities (including the removal of any amplitude
    that leaked off the computational span) is reported as the cumulative
    no-jump probability.
    """
    _check_target(target)
    if mode not in ("ideal", "simulated"):
        raise ValueError(f"unknown execution mode {mode!r}")
    hadamard = hadamard_pair()
    amps = np.array([1.0, 0.0, 0.0, 0.0], dtype=np.complex128)
    amps = hadamard @ amps
    cumulative = 1.0
    for stage_target in (target, "00"):
        if mode == "ideal":
            amps = ideal_gate_matrix(stage_target) @ amps
        else:
            result = run_conditional_phase(
                stage_target,
                state_from_qubit_amplitudes(amps),
                params,
                cfg,
                mode="simulated",
                cz_pulses=cz_pulses,
                not_pulses=not_pulses,
            )
            cumulative *= result.success_probability
            amps = qubit_amplitudes(result.final_state)
            # The final state is normalized over the full basis; squeeze out
            # any residual non-computational weight as heralded loss.
            residual = float(np.vdot(amps, amps).real)
            if residual <= 0.0:
                raise TotalDecayError("state fully decayed during Grover stages")
            cumulative *= residual
            amps = amps / math.sqrt(residual)
        amps = hadamard @ amps
    probabilities = {
        label: float(abs(amps[i]) ** 2) for i, label in enumerate(TARGET_LABELS)
    }
    return GroverResult(target, mode, probabilities, cumulative)


def gate_result_to_json(result: GateResult, fp: Optional[IO[str]] = None) -> str:
    """Serialize a gate result to the JSON document format."""
    doc = {
        "p_suc": result.success_probability,
        "fidelity": result.fidelity,
        "amplitudes": [
            {"state": state_label(s), "re": amp.real, "im": amp.imag}
            for s, amp in zip(
                result.final_state.basis, result.final_state.amplitudes
            )
        ],
        "diagnostics": {
            "max_excited_pop": result.diagnostics.max_excited_population,
            "max_photon_pop": result.diagnostics.max_photon_population,
        },
    }
    text = json.dumps(doc, indent=2)
    if fp is not None:
        fp.write(text)
    return text
