"""Labeled basis states and dense complex state vectors.

Two kinds of state spaces appear in the simulations: product states of two
atoms and the cavity mode (conditional phase gate), and bare four-level
states of a single atom (NOT gate).  Both are wrapped in the same
:class:`Basis` container so the Hamiltonian builders and the propagator can
treat them uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import BasisMismatchError, TotalDecayError

__all__ = [
    "AtomLevel",
    "BasisState",
    "Basis",
    "StateVector",
    "canonical_gate_basis",
    "single_atom_basis",
    "product_basis",
    "inner_product",
    "normalize",
    "state_label",
    "parse_state_label",
]


class AtomLevel(Enum):
    """One atomic level: qubit levels 0 and 1, auxiliary ground level sigma,
    and the two excited levels 2 and 3."""

    ZERO = "0"
    ONE = "1"
    SIGMA = "s"
    EXCITED2 = "2"
    EXCITED3 = "3"

    def __str__(self) -> str:
        return self.value


#: Levels that encode the qubit.
QUBIT_LEVELS = (AtomLevel.ZERO, AtomLevel.ONE)

#: Levels carrying spontaneous-emission decay.
EXCITED_LEVELS = (AtomLevel.EXCITED2, AtomLevel.EXCITED3)

_LEVEL_BY_LABEL = {level.value: level for level in AtomLevel}


@dataclass(frozen=True)
class BasisState:
    """Product state |atom1, atom2, n_photons> of two atoms and the cavity."""

    atom1: AtomLevel
    atom2: AtomLevel
    photons: int = 0

    def __post_init__(self) -> None:
        if self.photons < 0:
            raise ValueError(f"photon number must be >= 0, got {self.photons}")

    @property
    def label(self) -> str:
        return f"{self.atom1.value},{self.atom2.value},{self.photons}"

    def excited_count(self) -> int:
        """Number of atoms sitting in a decaying excited level."""
        return sum(1 for a in (self.atom1, self.atom2) if a in EXCITED_LEVELS)

    def __str__(self) -> str:
        return f"|{self.label}>"


#: Anything a Basis can contain: a two-atom product state or a bare level.
State = Union[BasisState, AtomLevel]


def state_label(state: State) -> str:
    """Serialize a basis state to its text label ("a1,a2,n" or a bare level)."""
    if isinstance(state, BasisState):
        return state.label
    return state.value


def parse_state_label(label: str) -> State:
    """Inverse of :func:`state_label`.

    Raises
    ------
    ValueError
        If the label does not name a known level or product state.
    """
    parts = label.split(",")
    if len(parts) == 1:
        try:
            return _LEVEL_BY_LABEL[parts[0]]
        except KeyError:
            raise ValueError(f"unknown level label {label!r}") from None
    if len(parts) != 3:
        raise ValueError(f"malformed state label {label!r}")
    try:
        a1 = _LEVEL_BY_LABEL[parts[0]]
        a2 = _LEVEL_BY_LABEL[parts[1]]
        photons = int(parts[2])
    except (KeyError, ValueError):
        raise ValueError(f"malformed state label {label!r}") from None
    return BasisState(a1, a2, photons)


class Basis:
    """Ordered, duplicate-free collection of basis states with index lookup."""

    def __init__(self, states: Iterable[State]):
        self._states = tuple(states)
        self._index = {s: i for i, s in enumerate(self._states)}
        if len(self._index) != len(self._states):
            raise ValueError("duplicate states in basis")

    @property
    def states(self) -> tuple[State, ...]:
        return self._states

    def __len__(self) -> int:
        return len(self._states)

    def __iter__(self):
        return iter(self._states)

    def __getitem__(self, index: int) -> State:
        return self._states[index]

    def __contains__(self, state: State) -> bool:
        return state in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Basis):
            return NotImplemented
        return self._states == other._states

    def __hash__(self) -> int:
        return hash(self._states)

    def __repr__(self) -> str:
        return f"Basis({', '.join(state_label(s) for s in self._states)})"

    def index_of(self, state: State) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise KeyError(f"state {state_label(state)} not in basis") from None

    def labels(self) -> tuple[str, ...]:
        return tuple(state_label(s) for s in self._states)


@lru_cache(maxsize=None)
def canonical_gate_basis() -> Basis:
    """The ten product states closed under the gate couplings, in the fixed
    order used throughout: |0,1,0>, |2,1,0>, |1,1,1>, |1,2,0>, |1,s,0>,
    |0,0,0>, |2,0,0>, |1,0,1>, |1,0,0>, |1,1,0>."""
    z, o, s, e2 = AtomLevel.ZERO, AtomLevel.ONE, AtomLevel.SIGMA, AtomLevel.EXCITED2
    return Basis(
        [
            BasisState(z, o, 0),
            BasisState(e2, o, 0),
            BasisState(o, o, 1),
            BasisState(o, e2, 0),
            BasisState(o, s, 0),
            BasisState(z, z, 0),
            BasisState(e2, z, 0),
            BasisState(o, z, 1),
            BasisState(o, z, 0),
            BasisState(o, o, 0),
        ]
    )


@lru_cache(maxsize=None)
def single_atom_basis() -> Basis:
    """Four-level basis (|0>, |1>, |s>, |3>) of one atom, no cavity mode."""
    return Basis(
        [AtomLevel.ZERO, AtomLevel.ONE, AtomLevel.SIGMA, AtomLevel.EXCITED3]
    )


def product_basis(
    levels1: Sequence[AtomLevel],
    levels2: Sequence[AtomLevel],
    n_max: int = 1,
) -> Basis:
    """Full product basis levels1 x levels2 x {0..n_max} photons.

    The two-qubit gate itself always runs in :func:`canonical_gate_basis`;
    this builder exists for exploratory checks on larger truncations.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return Basis(
        BasisState(a1, a2, n)
        for a1 in levels1
        for a2 in levels2
        for n in range(n_max + 1)
    )


class StateVector:
    """Complex amplitudes over an ordered basis.

    Amplitudes may be sub-normalized: under conditional (no-jump) evolution
    the squared norm is the accumulated no-emission probability.  Instances
    are immutable after construction.
    """

    __slots__ = ("basis", "_amplitudes")

    def __init__(self, basis: Basis, amplitudes: np.ndarray):
        amps = np.asarray(amplitudes, dtype=np.complex128).copy()
        if amps.shape != (len(basis),):
            raise ValueError(
                f"amplitude shape {amps.shape} does not match basis size {len(basis)}"
            )
        amps.setflags(write=False)
        self.basis = basis
        self._amplitudes = amps

    @classmethod
    def basis_state(cls, basis: Basis, state: State) -> "StateVector":
        """Unit vector along one basis state."""
        amps = np.zeros(len(basis), dtype=np.complex128)
        amps[basis.index_of(state)] = 1.0
        return cls(basis, amps)

    @classmethod
    def from_components(
        cls, basis: Basis, components: Mapping[State, complex]
    ) -> "StateVector":
        """Build from a sparse {state: amplitude} mapping (no normalization)."""
        amps = np.zeros(len(basis), dtype=np.complex128)
        for state, value in components.items():
            amps[basis.index_of(state)] = value
        return cls(basis, amps)

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only amplitude array in basis order."""
        return self._amplitudes

    def amplitude(self, state: State) -> complex:
        return complex(self._amplitudes[self.basis.index_of(state)])

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self._amplitudes, self._amplitudes).real)

    def populations(self) -> np.ndarray:
        return np.abs(self._amplitudes) ** 2

    def __repr__(self) -> str:
        terms = [
            f"({amp:.4g})|{state_label(s)}>"
            for s, amp in zip(self.basis, self._amplitudes)
            if abs(amp) > 1e-12
        ]
        return " + ".join(terms) if terms else "0"


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a`` and linear in ``b``.

    Raises
    ------
    BasisMismatchError
        If the two vectors do not share a basis.
    """
    if a.basis != b.basis:
        raise BasisMismatchError("state vectors live in different bases")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def normalize(v: StateVector) -> tuple[StateVector, float]:
    """Return (v / ||v||, ||v||^2).

    The second element is the success probability when ``v`` is the output
    of conditional evolution.  A vanishing norm means every amplitude
    decayed (or underflowed) and is reported as :class:`TotalDecayError`.
    """
    norm_sq = v.norm_sq
    if norm_sq <= 0.0 or not np.isfinite(norm_sq):
        raise TotalDecayError(f"cannot normalize state with ||v||^2 = {norm_sq}")
    return StateVector(v.basis, v.amplitudes / np.sqrt(norm_sq)), norm_sq
