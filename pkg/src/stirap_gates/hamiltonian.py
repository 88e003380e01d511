"""Hamiltonian assembly for the driven atoms-plus-cavity system.

`build_hermitian` assembles the coherent part (laser drives plus the
always-on cavity coupling g) on any basis closed under those couplings.
`build_conditional` adds the anti-Hermitian no-jump decay terms
-i kappa/2 per cavity photon and -i Gamma/2 per atom in an excited level,
which is the effective generator of the evolution conditioned on zero
emitted photons.

g is taken real and positive throughout (both atoms share the same
coupling), so the coherent part is a real symmetric matrix whenever the
drive envelopes are real.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import pulses
from .errors import ConfigurationError, DegenerateDarkSpaceError
from .states import (
    AtomLevel,
    Basis,
    BasisState,
    StateVector,
    canonical_gate_basis,
    state_label,
)

__all__ = [
    "SystemParams",
    "HamiltonianMatrix",
    "build_hermitian",
    "build_conditional",
    "dark_states",
    "coupling_pattern",
    "cavity_pattern",
    "decay_vector",
    "format_matrix",
]


@dataclass(frozen=True)
class SystemParams:
    """Physical rates in units where hbar = 1 and g sets the scale.

    Attributes
    ----------
    g : float
        Atom-cavity coupling (rad/time); must be positive.
    kappa : float
        Cavity field decay rate.
    gamma : float
        Spontaneous emission rate of the excited atomic levels.
    """

    g: float = 1.0
    kappa: float = 0.0
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.g <= 0:
            raise ConfigurationError(f"coupling g must be > 0, got {self.g}")
        if self.kappa < 0 or self.gamma < 0:
            raise ConfigurationError(
                f"decay rates must be >= 0, got kappa={self.kappa}, gamma={self.gamma}"
            )


@dataclass(frozen=True)
class _Transition:
    """Laser-driven transition: ground ``lower`` <-> excited ``upper`` on one
    atom of a product basis (atom 1 or 2) or on the bare single atom (None)."""

    atom: Optional[int]
    lower: AtomLevel
    upper: AtomLevel


_DRIVE_TRANSITIONS: dict[str, _Transition] = {
    pulses.DRIVE_OMEGA_01: _Transition(1, AtomLevel.ZERO, AtomLevel.EXCITED2),
    pulses.DRIVE_OMEGA_SIGMA2: _Transition(2, AtomLevel.SIGMA, AtomLevel.EXCITED2),
    pulses.DRIVE_NOT_0: _Transition(None, AtomLevel.ZERO, AtomLevel.EXCITED3),
    pulses.DRIVE_NOT_1: _Transition(None, AtomLevel.ONE, AtomLevel.EXCITED3),
    pulses.DRIVE_NOT_SIGMA: _Transition(None, AtomLevel.SIGMA, AtomLevel.EXCITED3),
}


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense complex matrix over a basis, tagged with the build time."""

    matrix: np.ndarray
    basis: Basis
    time: Optional[float] = None

    @property
    def dim(self) -> int:
        return len(self.basis)


def _excited_partner(state: BasisState, atom: int, lower: AtomLevel, upper: AtomLevel):
    level = state.atom1 if atom == 1 else state.atom2
    if level != lower:
        return None
    if atom == 1:
        return BasisState(upper, state.atom2, state.photons)
    return BasisState(state.atom1, upper, state.photons)


def coupling_pattern(drive: str, basis: Basis) -> np.ndarray:
    """Excitation-direction pattern matrix P of one drive, so that the drive
    contributes value * P + conj(value) * P.T to the Hamiltonian.

    Raises
    ------
    ConfigurationError
        If the drive is unknown, acts on the wrong kind of basis, or the
        basis is not closed under the transition.
    """
    try:
        tr = _DRIVE_TRANSITIONS[drive]
    except KeyError:
        raise ConfigurationError(f"unknown drive identifier {drive!r}") from None

    dim = len(basis)
    pattern = np.zeros((dim, dim))
    for i, state in enumerate(basis):
        if tr.atom is None:
            if not isinstance(state, AtomLevel):
                raise ConfigurationError(
                    f"drive {drive!r} targets a single atom but basis holds "
                    f"product states"
                )
            if state != tr.lower:
                continue
            partner = tr.upper
        else:
            if not isinstance(state, BasisState):
                raise ConfigurationError(
                    f"drive {drive!r} targets a two-atom product basis"
                )
            partner = _excited_partner(state, tr.atom, tr.lower, tr.upper)
            if partner is None:
                continue
        if partner not in basis:
            raise ConfigurationError(
                f"basis not closed under drive {drive!r}: "
                f"{state_label(state)} couples to missing {state_label(partner)}"
            )
        pattern[basis.index_of(partner), i] = 1.0
    return pattern


def cavity_pattern(basis: Basis) -> np.ndarray:
    """Photon-absorption pattern G for the cavity coupling: each atom in
    level 1 with n >= 1 photons couples to level 2 with n-1 photons and
    matrix element sqrt(n).  The Hamiltonian receives g * (G + G.T)."""
    dim = len(basis)
    pattern = np.zeros((dim, dim))
    for i, state in enumerate(basis):
        if not isinstance(state, BasisState) or state.photons < 1:
            continue
        for atom in (1, 2):
            partner = _excited_partner(state, atom, AtomLevel.ONE, AtomLevel.EXCITED2)
            if partner is None:
                continue
            partner = BasisState(partner.atom1, partner.atom2, state.photons - 1)
            if partner not in basis:
                raise ConfigurationError(
                    f"basis not closed under the cavity coupling: "
                    f"{state_label(state)} couples to missing {state_label(partner)}"
                )
            pattern[basis.index_of(partner), i] += np.sqrt(state.photons)
    return pattern


def decay_vector(params: SystemParams, basis: Basis) -> np.ndarray:
    """Per-state decay rates: kappa/2 per cavity photon plus gamma/2 per
    atom in an excited level.  The conditional Hamiltonian subtracts
    i * diag(decay_vector)."""
    rates = np.zeros(len(basis))
    for i, state in enumerate(basis):
        if isinstance(state, BasisState):
            rates[i] = 0.5 * params.kappa * state.photons
            rates[i] += 0.5 * params.gamma * state.excited_count()
        elif state in (AtomLevel.EXCITED2, AtomLevel.EXCITED3):
            rates[i] = 0.5 * params.gamma
    return rates


def build_hermitian(
    drives: Mapping[str, complex],
    g: float,
    basis: Basis,
    time: Optional[float] = None,
) -> HamiltonianMatrix:
    """Coherent Hamiltonian for the given instantaneous drive values.

    Parameters
    ----------
    drives : mapping
        Drive identifier -> complex envelope value (units of g).
    g : float
        Cavity coupling; ignored on bases without a photon degree of freedom.
    basis : Basis
        Must be closed under every referenced coupling.
    """
    dim = len(basis)
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for drive, value in drives.items():
        pattern = coupling_pattern(drive, basis)
        matrix += value * pattern + np.conj(value) * pattern.T
    cavity = cavity_pattern(basis)
    matrix += g * (cavity + cavity.T)
    return HamiltonianMatrix(matrix, basis, time)


def build_conditional(
    drives: Mapping[str, complex],
    params: SystemParams,
    basis: Basis,
    time: Optional[float] = None,
) -> HamiltonianMatrix:
    """No-jump conditional Hamiltonian: the coherent part minus
    i kappa/2 per photon and i Gamma/2 per excited atom on the diagonal."""
    herm = build_hermitian(drives, params.g, basis, time)
    matrix = herm.matrix - 1j * np.diag(decay_vector(params, basis))
    return HamiltonianMatrix(matrix, basis, time)


def dark_states(
    omega_01: complex, omega_sigma2: complex, g: float = 1.0
) -> tuple[StateVector, StateVector]:
    """Analytic zero-eigenvalue eigenstates of the coherent Hamiltonian on
    the canonical basis.

    Returns (D00, D01) with

        D00 ~ g|0,0,0> - omega_01|1,0,1>
        D01 ~ g*omega_sigma2|0,1,0> + g*omega_01|1,s,0>
              - omega_01*omega_sigma2|1,1,1>

    normalized and with the first nonzero amplitude (in canonical basis
    order) made real positive.

    Raises
    ------
    DegenerateDarkSpaceError
        If both drives vanish: the dark subspace then changes dimension and
        these two states are no longer distinguished.
    """
    if omega_01 == 0 and omega_sigma2 == 0:
        raise DegenerateDarkSpaceError(
            "dark states are undefined when both drives vanish"
        )
    if g <= 0:
        raise ConfigurationError(f"coupling g must be > 0, got {g}")
    basis = canonical_gate_basis()
    d00 = np.zeros(len(basis), dtype=np.complex128)
    d00[5] = g
    d00[7] = -omega_01
    d01 = np.zeros(len(basis), dtype=np.complex128)
    d01[0] = g * omega_sigma2
    d01[4] = g * omega_01
    d01[2] = -omega_01 * omega_sigma2
    return _fixed_sign(basis, d00), _fixed_sign(basis, d01)


def _fixed_sign(basis: Basis, amplitudes: np.ndarray) -> StateVector:
    amps = amplitudes / np.linalg.norm(amplitudes)
    for a in amps:
        if abs(a) > 1e-15:
            amps = amps * (np.conj(a) / abs(a))
            break
    return StateVector(basis, amps)


def format_matrix(ham: HamiltonianMatrix) -> str:
    """Dense row-major dump in scientific notation, one row per line, for
    diffing against a hand-transcribed reference."""
    lines = []
    if ham.time is not None:
        lines.append(f"# t = {ham.time!r}")
    for row in ham.matrix:
        lines.append("  ".join(f"{z.real:+.6e}{z.imag:+.6e}j" for z in row))
    return "\n".join(lines)
