"""Gaussian pulse envelopes and the named STIRAP schedules.

All times are in units of 1/g and all Rabi amplitudes in units of g, where
g is the atom-cavity coupling.  Phases are restricted to {0, pi} by the
schedule constructors, which keeps every envelope real up to sign and the
adiabatic transport path free of geometric phase.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "DRIVE_OMEGA_01",
    "DRIVE_OMEGA_SIGMA2",
    "DRIVE_NOT_0",
    "DRIVE_NOT_1",
    "DRIVE_NOT_SIGMA",
    "Pulse",
    "PulseSchedule",
    "CzPulseParams",
    "NotPulseParams",
    "gaussian_value",
    "drives_at",
    "cz_schedule",
    "not_schedule",
    "schedule_to_json",
    "schedule_from_json",
]

# Drive identifiers.  The first two are the gate lasers (atom 1 pump on
# 0<->2 and atom 2 pump on sigma<->2); the not_* drives couple one ground
# level of a single atom to its second excited level 3.
DRIVE_OMEGA_01 = "omega_01"
DRIVE_OMEGA_SIGMA2 = "omega_sigma2"
DRIVE_NOT_0 = "not_0"
DRIVE_NOT_1 = "not_1"
DRIVE_NOT_SIGMA = "not_sigma"

#: Window padding in units of the pulse width: the envelope at the window
#: boundary is below exp(-12.5) ~ 4e-6 of peak, so results are insensitive
#: to the exact cutoff.
WINDOW_PAD_WIDTHS = 5.0


@dataclass(frozen=True)
class Pulse:
    """One Gaussian pulse: amplitude * exp(-(t-center)^2 / (2 tau^2)) * e^{i phase}."""

    drive: str
    amplitude: float
    center: float
    tau: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise ConfigurationError(f"pulse amplitude must be >= 0, got {self.amplitude}")
        if self.tau <= 0:
            raise ConfigurationError(f"pulse width tau must be > 0, got {self.tau}")


def gaussian_value(pulse: Pulse, t: float) -> complex:
    """Complex envelope of one pulse at time ``t``."""
    arg = (t - pulse.center) / pulse.tau
    return pulse.amplitude * math.exp(-0.5 * arg * arg) * complex(
        math.cos(pulse.phase), math.sin(pulse.phase)
    )


@dataclass(frozen=True)
class PulseSchedule:
    """A set of pulses together with the simulation window [t_start, t_end]."""

    pulses: tuple[Pulse, ...]
    t_start: float
    t_end: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if self.t_end <= self.t_start:
            raise ConfigurationError("schedule window must have t_end > t_start")
        for p in self.pulses:
            if not (self.t_start <= p.center <= self.t_end):
                raise ConfigurationError(
                    f"pulse center {p.center} outside window "
                    f"[{self.t_start}, {self.t_end}]"
                )

    @property
    def span(self) -> float:
        return self.t_end - self.t_start

    def drive_names(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for p in self.pulses:
            seen.setdefault(p.drive, None)
        return tuple(seen)

    def drive_values(self, drive: str, times: np.ndarray) -> np.ndarray:
        """Vectorized coherent sum of all pulses on one drive."""
        t = np.asarray(times, dtype=float)
        total = np.zeros(t.shape, dtype=np.complex128)
        for p in self.pulses:
            if p.drive != drive:
                continue
            arg = (t - p.center) / p.tau
            total += p.amplitude * np.exp(-0.5 * arg * arg) * np.exp(1j * p.phase)
        return total


def drives_at(schedule: PulseSchedule, t: float) -> dict[str, complex]:
    """Map drive identifier -> summed complex envelope value at time ``t``.

    Pulses sharing a drive add coherently.  The returned mapping yields 0
    for any drive the schedule never references.
    """
    values: defaultdict[str, complex] = defaultdict(complex)
    for p in schedule.pulses:
        values[p.drive] += gaussian_value(p, t)
    return values


def _check_stirap_params(omega_max: float, T: float, t0: float, tau: float) -> None:
    if omega_max <= 0:
        raise ConfigurationError(f"omega_max must be > 0, got {omega_max}")
    if T <= 0:
        raise ConfigurationError(f"T must be > 0, got {T}")
    if not (0 < t0 < T / 2):
        raise ConfigurationError(f"t0 must satisfy 0 < t0 < T/2, got {t0}")
    if tau <= 0:
        raise ConfigurationError(f"tau must be > 0, got {tau}")


def cz_schedule(
    omega_max: float = 0.16,
    T: float = 200.0,
    t0: float = 30.0,
    tau: float = 40.0,
) -> PulseSchedule:
    """Two-STIRAP schedule generating the conditional phase on |0>_1|1>_2.

    Stage (i), centered at -T/2, applies omega_sigma2 before omega_01
    (counterintuitive order for the populated qubit transition).  Stage (ii),
    centered at +T/2, is the mirror-image reverse process with the
    omega_sigma2 pulse phase shifted by pi; that phase flip is what turns
    the round trip through |1,s,0> into an overall minus sign on the
    labeled state.

    Pulse centers sit at -T/2 -/+ t0 and +T/2 -/+ t0; all four pulses share
    ``omega_max`` and ``tau``.  The window pads the outermost centers by
    5 tau.
    """
    _check_stirap_params(omega_max, T, t0, tau)
    pulses = (
        Pulse(DRIVE_OMEGA_SIGMA2, omega_max, -T / 2 - t0, tau, 0.0),
        Pulse(DRIVE_OMEGA_01, omega_max, -T / 2 + t0, tau, 0.0),
        Pulse(DRIVE_OMEGA_01, omega_max, +T / 2 - t0, tau, 0.0),
        Pulse(DRIVE_OMEGA_SIGMA2, omega_max, +T / 2 + t0, tau, math.pi),
    )
    pad = WINDOW_PAD_WIDTHS * tau
    return PulseSchedule(pulses, -T / 2 - t0 - pad, T / 2 + t0 + pad)


# Per-stage drive precedence of the three chained STIRAPs of the NOT gate:
# each tuple is (earlier drive, later drive).
_NOT_STAGE_ORDER = (
    (DRIVE_NOT_SIGMA, DRIVE_NOT_1),
    (DRIVE_NOT_1, DRIVE_NOT_0),
    (DRIVE_NOT_0, DRIVE_NOT_SIGMA),
)


def not_schedule(
    omega_max: float = 2.0,
    T_step: float = 200.0,
    t0: float = 30.0,
    tau: float = 40.0,
) -> PulseSchedule:
    """Three-STIRAP schedule for the single-atom NOT gate.

    Stages are centered at -T_step, 0 and +T_step, with per-stage drive
    order (sigma, 1), (1, 0), (0, sigma) and the two pulses of each stage
    offset by -/+ t0.  Within every stage the two pulses differ in phase
    by pi, which makes each dark-state transport land with a + sign so the
    composite map is exactly |0> -> |1>, |1> -> |0>.

    Phases are assigned so that consecutive stages agree on the phase of
    the drive they share (stage 1 and 2 both drive not_1, stage 2 and 3
    both drive not_0).  With a conflicting assignment the two same-drive
    Gaussians cancel midway between stages, briefly removing the strong
    coupling that protects the populated level, and the gate error grows
    by orders of magnitude.

    The defaults make the pulses intense (omega_max tau = 80 >> 1), which
    is what keeps the transfer adiabatic and nearly lossless even at
    spontaneous-emission rates comparable to g.
    """
    _check_stirap_params(omega_max, T_step, t0, tau)
    centers = (-T_step, 0.0, T_step)
    # Alternating leading-pulse phase keeps shared drives phase-continuous
    # across stages while preserving the pi offset inside each stage.
    stage_phases = ((0.0, math.pi), (math.pi, 0.0), (0.0, math.pi))
    pulses = []
    for stage_center, (early, late), (phase_early, phase_late) in zip(
        centers, _NOT_STAGE_ORDER, stage_phases
    ):
        pulses.append(Pulse(early, omega_max, stage_center - t0, tau, phase_early))
        pulses.append(Pulse(late, omega_max, stage_center + t0, tau, phase_late))
    pad = WINDOW_PAD_WIDTHS * tau
    return PulseSchedule(tuple(pulses), -T_step - t0 - pad, T_step + t0 + pad)


@dataclass(frozen=True)
class CzPulseParams:
    """Configurable knobs of the conditional-phase-gate schedule."""

    omega_max: float = 0.16
    T: float = 200.0
    t0: float = 30.0
    tau: float = 40.0

    def schedule(self) -> PulseSchedule:
        return cz_schedule(self.omega_max, self.T, self.t0, self.tau)


@dataclass(frozen=True)
class NotPulseParams:
    """Configurable knobs of the NOT-gate schedule."""

    omega_max: float = 2.0
    T_step: float = 200.0
    t0: float = 30.0
    tau: float = 40.0

    def schedule(self) -> PulseSchedule:
        return not_schedule(self.omega_max, self.T_step, self.t0, self.tau)


def schedule_to_json(schedule: PulseSchedule, fp: Union[IO[str], None] = None) -> str:
    """Serialize a schedule to the JSON document format.

    Times are in 1/g units, amplitudes in g units, phases in radians.
    """
    doc = {
        "pulses": [
            {
                "drive": p.drive,
                "amplitude": p.amplitude,
                "center": p.center,
                "tau": p.tau,
                "phase": p.phase,
            }
            for p in schedule.pulses
        ],
        "t_start": schedule.t_start,
        "t_end": schedule.t_end,
    }
    text = json.dumps(doc, indent=2)
    if fp is not None:
        fp.write(text)
    return text


def schedule_from_json(source: Union[str, IO[str]]) -> PulseSchedule:
    """Parse a schedule from JSON text or a readable file object."""
    doc = json.loads(source) if isinstance(source, str) else json.load(source)
    try:
        pulses = tuple(
            Pulse(
                drive=str(p["drive"]),
                amplitude=float(p["amplitude"]),
                center=float(p["center"]),
                tau=float(p["tau"]),
                phase=float(p.get("phase", 0.0)),
            )
            for p in doc["pulses"]
        )
        return PulseSchedule(pulses, float(doc["t_start"]), float(doc["t_end"]))
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed schedule document: {exc}") from exc
