"""Parameter-sweep engine over the (kappa/g, Gamma/g) plane.

Each grid point is an independent propagation of the conditional phase
gate from a configured initial state; points run in parallel across
worker processes but results are always gathered in grid order, so the
output is deterministic regardless of worker count.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, replace
from typing import IO, Optional, Sequence, Union

import numpy as np

from .errors import ConfigurationError, SimulationError
from .gates import ideal_gate_matrix
from .hamiltonian import SystemParams
from .propagator import (
    IntegratorConfig,
    computational_states,
    gate_fidelity,
    propagate,
)
from .pulses import CzPulseParams
from .states import StateVector, canonical_gate_basis

__all__ = [
    "GridSpec",
    "SweepConfig",
    "SweepRow",
    "run_sweep",
    "initial_state_vector",
    "sweep_rows_to_csv",
    "sweep_config_to_json",
    "sweep_config_from_json",
]

#: Named initial-state selectors (amplitudes on 00, 01, 10, 11).
_NAMED_INITIALS = {
    "uniform": (0.5, 0.5, 0.5, 0.5),
    "010": (0.0, 1.0, 0.0, 0.0),
    "000": (1.0, 0.0, 0.0, 0.0),
}


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of a non-negative rate in units of g."""

    start: float = 0.0
    stop: float = 0.2
    points: int = 41

    def __post_init__(self) -> None:
        if self.points < 1:
            raise ConfigurationError("grid needs at least one point")
        if self.start < 0 or self.stop < self.start:
            raise ConfigurationError(
                f"grid must be non-negative and increasing, got "
                f"[{self.start}, {self.stop}]"
            )

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepConfig:
    kappa_grid: GridSpec = GridSpec()
    gamma_grid: GridSpec = GridSpec()
    initial: Union[str, tuple] = "uniform"
    pulses: CzPulseParams = CzPulseParams()
    integrator: IntegratorConfig = IntegratorConfig()
    workers: int = 1

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if isinstance(self.initial, str) and self.initial not in _NAMED_INITIALS:
            raise ConfigurationError(
                f"unknown initial-state selector {self.initial!r}; expected one of "
                f"{tuple(_NAMED_INITIALS)} or four custom amplitudes"
            )


@dataclass(frozen=True)
class SweepRow:
    """One grid point: rates, success probability and fidelity.

    ``error`` is set (and the numeric fields are NaN) when the propagation
    at this point failed; the sweep itself carries on.
    """

    kappa: float
    gamma: float
    p_suc: float
    fidelity: float
    error: Optional[str] = None


def initial_state_vector(selector: Union[str, Sequence[complex]]) -> StateVector:
    """Resolve a selector ("uniform" / "010" / "000" or four amplitudes on
    00, 01, 10, 11) to a normalized state on the canonical basis."""
    if isinstance(selector, str):
        try:
            amps = np.array(_NAMED_INITIALS[selector], dtype=np.complex128)
        except KeyError:
            raise ConfigurationError(
                f"unknown initial-state selector {selector!r}"
            ) from None
    else:
        amps = np.asarray(list(selector), dtype=np.complex128)
        if amps.shape != (4,):
            raise ConfigurationError("custom initial state needs four amplitudes")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ConfigurationError("custom initial state must be nonzero")
        amps = amps / norm
    basis = canonical_gate_basis()
    full = np.zeros(len(basis), dtype=np.complex128)
    comp = computational_states()
    for amp, state in zip(amps, comp):
        full[basis.index_of(state)] = amp
    return StateVector(basis, full)


def _sweep_point(args: tuple) -> SweepRow:
    kappa, gamma, cfg = args
    try:
        psi0 = initial_state_vector(cfg.initial)
        params = SystemParams(g=1.0, kappa=kappa, gamma=gamma)
        traj = propagate(cfg.pulses.schedule(), params, psi0, cfg.integrator)
        fidelity = gate_fidelity(traj, ideal_gate_matrix("01"), psi0)
        return SweepRow(kappa, gamma, traj.final_norm_sq, fidelity)
    except SimulationError as exc:
        return SweepRow(kappa, gamma, float("nan"), float("nan"), error=str(exc))


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Evaluate the gate over the configured rate grid.

    Returns one row per point, ordered Gamma-major (kappa varies fastest).
    Row values depend only on the grid point, never on worker count or
    completion order.
    """
    kappas = cfg.kappa_grid.values()
    gammas = cfg.gamma_grid.values()
    tasks = [
        (float(kappa), float(gamma), cfg)
        for gamma in gammas
        for kappa in kappas
    ]
    if cfg.workers == 1 or len(tasks) <= 1:
        return [_sweep_point(task) for task in tasks]
    with multiprocessing.Pool(processes=cfg.workers) as pool:
        return pool.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * cfg.workers)))


def sweep_rows_to_csv(rows: Sequence[SweepRow], fp: IO[str]) -> None:
    """Write the sweep table with a one-line header, 6 significant digits."""
    fp.write("kappa_over_g,gamma_over_g,p_suc,fidelity\n")
    for row in rows:
        fp.write(
            f"{row.kappa:.6g},{row.gamma:.6g},{row.p_suc:.6g},{row.fidelity:.6g}\n"
        )


def _grid_to_doc(grid: GridSpec) -> dict:
    return {"min": grid.start, "max": grid.stop, "points": grid.points}


def _grid_from_doc(doc: dict) -> GridSpec:
    return GridSpec(float(doc["min"]), float(doc["max"]), int(doc["points"]))


def sweep_config_to_json(cfg: SweepConfig, fp: Optional[IO[str]] = None) -> str:
    initial = cfg.initial
    if not isinstance(initial, str):
        initial = {"amplitudes": [[z.real, z.imag] for z in map(complex, initial)]}
    doc = {
        "kappa_grid": _grid_to_doc(cfg.kappa_grid),
        "gamma_grid": _grid_to_doc(cfg.gamma_grid),
        "initial": initial,
        "pulses": {
            "omega_max": cfg.pulses.omega_max,
            "T": cfg.pulses.T,
            "t0": cfg.pulses.t0,
            "tau": cfg.pulses.tau,
        },
        "integrator": {"step": cfg.integrator.step},
    }
    text = json.dumps(doc, indent=2)
    if fp is not None:
        fp.write(text)
    return text


def _parse_amplitude(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise ConfigurationError(f"cannot parse amplitude entry {entry!r}")


def sweep_config_from_json(
    source: Union[str, IO[str]], workers: int = 1
) -> SweepConfig:
    """Parse a sweep configuration document.

    Schema: {kappa_grid: {min, max, points}, gamma_grid: {...},
    initial: "uniform" | "010" | "000" | {amplitudes: [...]},
    pulses: {omega_max, T, t0, tau}, integrator: {step}}.
    Every section is optional and falls back to the defaults.
    """
    doc = json.loads(source) if isinstance(source, str) else json.load(source)
    try:
        cfg = SweepConfig(workers=workers)
        if "kappa_grid" in doc:
            cfg = replace(cfg, kappa_grid=_grid_from_doc(doc["kappa_grid"]))
        if "gamma_grid" in doc:
            cfg = replace(cfg, gamma_grid=_grid_from_doc(doc["gamma_grid"]))
        if "initial" in doc:
            initial = doc["initial"]
            if isinstance(initial, dict):
                initial = tuple(
                    _parse_amplitude(a) for a in initial["amplitudes"]
                )
            cfg = replace(cfg, initial=initial)
        if "pulses" in doc:
            p = doc["pulses"]
            cfg = replace(
                cfg,
                pulses=CzPulseParams(
                    omega_max=float(p.get("omega_max", 0.16)),
                    T=float(p.get("T", 200.0)),
                    t0=float(p.get("t0", 30.0)),
                    tau=float(p.get("tau", 40.0)),
                ),
            )
        if "integrator" in doc:
            cfg = replace(
                cfg,
                integrator=IntegratorConfig(
                    step=float(doc["integrator"].get("step", 0.02))
                ),
            )
        return cfg
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed sweep config: {exc}") from exc
