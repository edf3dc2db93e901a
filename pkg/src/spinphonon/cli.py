"""Command-line entry points for Hamiltonian dumps, circuits, runs, and checks.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .evolve import KrylovConvergenceError, cutoff_sweep, write_timeseries_csv
from .experiments import (
    PRESETS,
    preset_params,
    run_experiment,
    run_preset,
    run_readout_demo,
    verify,
)
from .gates import circuit_to_text
from .model import ModelParams, load_config
from .operators import (
    CapacityError,
    ChargeViolationError,
    build_total_hamiltonian,
    dump_operator_text,
    sector_hamiltonian,
)
from .readout import FitError
from .trotter import compress, plan_n2, plan_n4, transpile_cnots

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


def _add_params_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=sorted(PRESETS),
                       help="named parameter preset")
    group.add_argument("--config", type=Path, help="key=value parameter file")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one parameter (repeatable)")


def _parse_overrides(pairs: list[str]) -> dict:
    overrides: dict = {}
    converters = {
        "n_sites": int, "charge_sector": int, "trotter_steps": int,
        "cutoff": int,
        "lattice_spacing": float, "fermion_mass": float, "boson_mass": float,
        "coupling": float, "trotter_dt": float,
    }
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValueError(f"--set expects KEY=VALUE, got {pair!r}")
        if key == "cutoffs":
            overrides[key] = tuple(int(c) for c in value.split(","))
        elif key in converters:
            overrides[key] = converters[key](value)
        else:
            raise ValueError(f"unknown parameter {key!r}")
    return overrides


def _resolve_params(args) -> ModelParams:
    overrides = _parse_overrides(args.set)
    if args.preset:
        return preset_params(args.preset, overrides)
    params = load_config(args.config)
    if "cutoff" in overrides:
        overrides["cutoffs"] = (overrides.pop("cutoff"),) * params.n_sites
    return dataclasses.replace(params, **overrides) if overrides else params


def _cmd_hamiltonian(args) -> int:
    params = _resolve_params(args)
    op = build_total_hamiltonian(params) if args.full else sector_hamiltonian(params)
    text = dump_operator_text(op)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_circuit(args) -> int:
    params = _resolve_params(args)
    if params.n_sites == 2:
        plans = {"main": plan_n2(params, mechanism=args.mechanism)}
    else:
        main, mode2 = plan_n4(params, mechanism=args.mechanism)
        plans = {"main": main, "mode2": mode2}
    if args.register not in plans:
        raise ValueError(f"register {args.register!r} not in {sorted(plans)}")
    plan = plans[args.register]
    circuit = plan.circuit(steps=args.steps)
    if not args.no_compress:
        measured = None
        if args.measured == "spin":
            measured = "spin"
        elif args.measured and args.measured.startswith("mode"):
            measured = ("mode", int(args.measured[4:]))
        circuit = compress(circuit, initial_state_known=True,
                           measured_observable=measured)
    if args.transpile:
        circuit = transpile_cnots(circuit)
    text = circuit_to_text(circuit)
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        sidecar = out.with_suffix(".jsonl")
        with open(sidecar, "w") as fh:
            for index, op in enumerate(circuit.ops):
                step, _, term = op.tag.partition(":")
                fh.write(json.dumps({
                    "index": index,
                    "step": int(step) if step.isdigit() else None,
                    "term": term,
                    "kind": op.kind,
                }) + "\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    params = _resolve_params(args)
    run = run_experiment(
        params,
        name=args.preset or "custom",
        continuous_cutoff=args.continuous_cutoff,
        out_dir=args.out_dir,
        mechanism=args.mechanism,
    )
    print(f"run directory: {run.directory}")
    return EXIT_OK


def _cmd_sweep_cutoff(args) -> int:
    params = _resolve_params(args)
    cutoffs = [int(c) for c in args.cutoffs.split(",")]
    table = cutoff_sweep(params, cutoffs, time=args.time)
    print(f"mean occupations at t={table.time}")
    header = "cutoff," + ",".join(f"mode{m}" for m in range(params.n_sites))
    print(header)
    for lam, row in zip(table.cutoffs, table.occupations):
        print(f"{lam}," + ",".join(f"{x:.6f}" for x in row))
    for k in range(len(cutoffs) - 1):
        dev = table.relative_deviations[k].max()
        print(f"max relative deviation {cutoffs[k]} -> {cutoffs[k + 1]}: {dev:.4%}")
    if args.out:
        write_timeseries_csv(
            Path(args.out),
            table.cutoffs,
            [f"mode{m}" for m in range(params.n_sites)],
            table.occupations,
        )
    return EXIT_OK


def _cmd_readout_fit(args) -> int:
    demo = run_readout_demo(
        args.preset, mode=args.mode, step=args.step, shots=args.shots,
        seed=args.seed, resamples=args.resamples, n_max=args.n_max,
        out_dir=args.out_dir,
    )
    print(f"fit cutoff n_max={demo.n_max}, shots={demo.shots}, seed={demo.seed}")
    print("n,true,fitted,sigma")
    for n in range(demo.n_max + 1):
        print(f"{n},{demo.true_populations[n]:.6f},{demo.fitted[n]:.6f},"
              f"{demo.sigma[n]:.6f}")
    if demo.csv_path:
        print(f"wrote {demo.csv_path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = verify(args.suite)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["passed"] else EXIT_NUMERICAL


def _cmd_preset(args) -> int:
    run = run_preset(args.name, out_dir=args.out_dir,
                     overrides=_parse_overrides(args.set),
                     mechanism=args.mechanism)
    print(f"run directory: {run.directory}")
    for name in run.files:
        print(f"  {name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinphonon",
        description="Classical emulator of spin-phonon quantum simulations of "
                    "the lattice Yukawa model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hamiltonian", help="dump the (reduced) Hamiltonian")
    _add_params_arguments(p)
    p.add_argument("--full", action="store_true",
                   help="dump the unprojected N-qubit Hamiltonian")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_hamiltonian)

    p = sub.add_parser("circuit", help="emit a Trotter circuit")
    _add_params_arguments(p)
    p.add_argument("--register", default="main", help="main or mode2")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--no-compress", action="store_true")
    p.add_argument("--measured", default=None,
                   help="spin or modeM, enables measurement-tail elision")
    p.add_argument("--transpile", action="store_true",
                   help="replace CNOTs by their MS dressing")
    p.add_argument("--mechanism", default="direct_displacement",
                   choices=["direct_displacement", "ancilla"])
    p.add_argument("--out", type=Path,
                   help="write circuit here plus a .jsonl sidecar")
    p.set_defaults(func=_cmd_circuit)

    p = sub.add_parser("evolve", help="run Trotter + continuous evolution")
    _add_params_arguments(p)
    p.add_argument("--continuous-cutoff", type=int, default=None)
    p.add_argument("--out-dir", type=Path, default=Path("runs"))
    p.add_argument("--mechanism", default="direct_displacement",
                   choices=["direct_displacement", "ancilla"])
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("sweep-cutoff", help="cutoff convergence study")
    _add_params_arguments(p)
    p.add_argument("--cutoffs", required=True, help="comma list, ascending")
    p.add_argument("--time", type=float, default=None)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_sweep_cutoff)

    p = sub.add_parser("readout-fit", help="sideband readout roundtrip demo")
    p.add_argument("--preset", default="n4_qm1_g2", choices=sorted(PRESETS))
    p.add_argument("--mode", type=int, default=2)
    p.add_argument("--step", type=int, default=3)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resamples", type=int, default=100)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--out-dir", type=Path, default=None)
    p.set_defaults(func=_cmd_readout_fit)

    p = sub.add_parser("verify", help="run invariant suites headlessly")
    p.add_argument("--suite", default="all",
                   choices=["all", "algebra", "gates", "trotter",
                            "convergence", "readout"])
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("preset", help="run a named reproduction preset")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--out-dir", type=Path, default=Path("runs"))
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--mechanism", default="direct_displacement",
                   choices=["direct_displacement", "ancilla"])
    p.set_defaults(func=_cmd_preset)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CapacityError, ChargeViolationError, KrylovConvergenceError,
            FitError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
