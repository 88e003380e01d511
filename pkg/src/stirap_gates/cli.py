"""Command-line interface.

Subcommands
-----------
simulate    one conditional-phase propagation; prints P_suc and F, and can
            dump the sampled trajectory to CSV
sweep       (kappa/g, Gamma/g) grid scan driven by a JSON config
gate        any of the four conditional phase gates; prints the truth table
grover      single-iteration two-qubit search
darkstates  analytic dark states for given drive amplitudes
verify      built-in invariant suite

Exit codes: 0 success, 1 usage error, 2 numerical failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence


from .errors import SimulationError
from .gates import TARGET_LABELS, GateSpec, grover_search
from .hamiltonian import SystemParams, dark_states
from .propagator import (
    IntegratorConfig,
    computational_states,
    gate_fidelity,
    propagate,
    trajectory_to_csv,
)
from .pulses import CzPulseParams
from .states import StateVector, state_label
from .sweep import (
    initial_state_vector,
    run_sweep,
    sweep_config_from_json,
    sweep_rows_to_csv,
)
from .verify import run_all_checks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3


def _add_rate_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kappa", type=float, default=0.1, help="cavity decay rate kappa/g")
    parser.add_argument("--gamma", type=float, default=0.1, help="spontaneous emission rate Gamma/g")


def _add_pulse_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--omega-max", type=float, default=0.16, help="peak Rabi amplitude in units of g")
    parser.add_argument("--T", type=float, default=200.0, help="separation of the two STIRAP stages (1/g)")
    parser.add_argument("--t0", type=float, default=30.0, help="pulse offset inside a stage (1/g)")
    parser.add_argument("--tau", type=float, default=40.0, help="Gaussian pulse width (1/g)")
    parser.add_argument("--step", type=float, default=0.02, help="integrator step (1/g)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stirap-gates",
        description="Dissipative STIRAP conditional-phase-gate simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one conditional-phase propagation")
    p_sim.add_argument(
        "--initial",
        default="uniform",
        help="initial state: uniform, 010, 000, or four comma-separated amplitudes on 00,01,10,11",
    )
    _add_rate_flags(p_sim)
    _add_pulse_flags(p_sim)
    p_sim.add_argument("--out", help="write the sampled trajectory to this CSV file")

    p_sweep = sub.add_parser("sweep", help="grid scan over kappa/g and Gamma/g")
    p_sweep.add_argument("--config", help="JSON sweep configuration file")
    p_sweep.add_argument("--out", help="output CSV path (default: stdout)")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    p_gate = sub.add_parser("gate", help="conditional phase gate truth table")
    p_gate.add_argument("--target", required=True, choices=TARGET_LABELS)
    p_gate.add_argument("--mode", default="ideal", choices=("ideal", "simulated"),
                        help="how the conjugating NOTs are executed")
    _add_rate_flags(p_gate)

    p_grover = sub.add_parser("grover", help="single-iteration two-qubit search")
    p_grover.add_argument("--target", required=True, choices=TARGET_LABELS)
    p_grover.add_argument("--mode", default="ideal", choices=("ideal", "simulated"))
    _add_rate_flags(p_grover)

    p_dark = sub.add_parser("darkstates", help="print the analytic dark states")
    p_dark.add_argument("--omega01", type=float, required=True, help="drive on the 0<->2 transition of atom 1 (units g)")
    p_dark.add_argument("--omegasigma2", type=float, required=True, help="drive on the s<->2 transition of atom 2 (units g)")

    sub.add_parser("verify", help="run the built-in invariant suite")

    return parser


def _parse_initial(text: str) -> StateVector:
    if text in ("uniform", "010", "000"):
        return initial_state_vector(text)
    parts = text.split(",")
    if len(parts) != 4:
        raise SimulationError(
            f"initial state must be uniform/010/000 or four comma-separated "
            f"amplitudes, got {text!r}"
        )
    return initial_state_vector([complex(p) for p in parts])


def _cmd_simulate(args: argparse.Namespace) -> int:
    psi0 = _parse_initial(args.initial)
    params = SystemParams(g=1.0, kappa=args.kappa, gamma=args.gamma)
    schedule = CzPulseParams(args.omega_max, args.T, args.t0, args.tau).schedule()
    cfg = IntegratorConfig(step=args.step)
    traj = propagate(schedule, params, psi0, cfg)
    from .gates import ideal_gate_matrix

    fidelity = gate_fidelity(traj, ideal_gate_matrix("01"), psi0)
    print(f"p_suc={traj.final_norm_sq:.4f} F={fidelity:.4f}")
    if args.out:
        with open(args.out, "w", newline="") as fp:
            trajectory_to_csv(traj, fp)
        print(f"trajectory written to {args.out}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.config:
        with open(args.config) as fp:
            cfg = sweep_config_from_json(fp, workers=args.workers)
    else:
        from .sweep import SweepConfig

        cfg = SweepConfig(workers=args.workers)
    rows = run_sweep(cfg)
    if args.out:
        with open(args.out, "w", newline="") as fp:
            sweep_rows_to_csv(rows, fp)
        print(f"{len(rows)} rows written to {args.out}")
    else:
        sweep_rows_to_csv(rows, sys.stdout)
    failed = [r for r in rows if r.error]
    if failed:
        print(f"warning: {len(failed)} grid points failed", file=sys.stderr)
    return EXIT_OK


def _cmd_gate(args: argparse.Namespace) -> int:
    spec = GateSpec("conditional-phase", args.target, args.mode)
    params = SystemParams(g=1.0, kappa=args.kappa, gamma=args.gamma)
    basis_states = computational_states()
    signs = []
    from .states import canonical_gate_basis

    for state in basis_states:
        psi0 = StateVector.basis_state(canonical_gate_basis(), state)
        result = spec.run(psi0, params)
        amp = result.final_state.amplitude(state)
        signs.append("-" if amp.real < 0 else "+")
        print(
            f"input {state_label(state)}: p_suc={result.success_probability:.4f} "
            f"F={result.fidelity:.4f} amp=({amp.real:+.4f}{amp.imag:+.4f}j)"
        )
    print(f"signs: {','.join(signs)}")
    return EXIT_OK


def _cmd_grover(args: argparse.Namespace) -> int:
    params = SystemParams(g=1.0, kappa=args.kappa, gamma=args.gamma)
    result = grover_search(args.target, params, mode=args.mode)
    for label in TARGET_LABELS:
        print(f"P({label})={result.probabilities[label]:.6f}")
    print(f"best={result.best}")
    if args.mode == "simulated":
        print(f"cumulative_p_suc={result.success_probability:.6f}")
    return EXIT_OK


def _cmd_darkstates(args: argparse.Namespace) -> int:
    d00, d01 = dark_states(args.omega01, args.omegasigma2, 1.0)
    for name, dark in (("D00", d00), ("D01", d01)):
        print(f"{name}:")
        for state, amp in zip(dark.basis, dark.amplitudes):
            if abs(amp) > 1e-12:
                print(f"  {state_label(state)}: {amp.real:+.6f}{amp.imag:+.6f}j")
    return EXIT_OK


def _cmd_verify(_args: argparse.Namespace) -> int:
    results = run_all_checks()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        detail = f"  ({result.detail})" if result.detail else ""
        print(f"{status} {result.name}{detail}")
    if all(r.passed for r in results):
        print(f"{len(results)} checks passed")
        return EXIT_OK
    return EXIT_VERIFICATION


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "gate": _cmd_gate,
    "grover": _cmd_grover,
    "darkstates": _cmd_darkstates,
    "verify": _cmd_verify,
}


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code instead of raising."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
