"""Command-line front end.

    pilotwave run <preset|config-file> [--out DIR] [--dt X] [--steps N]
                  [--x0 X] [--strobe {e3e1|e3e0|<value>}] [--outputs LIST]
                  [--lyap-steps N]
    pilotwave sweep <preset> --coef {c1|c2} --values v1,v2,... [--out DIR]
    pilotwave list-presets

Exit codes: 0 success, 2 configuration error, 3 physics termination (a
trajectory hit a wavefunction node), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import scenarios

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilotwave",
        description="Pilot-wave trajectories in a bistable potential: "
        "integration, Poincare sections, power spectra, Lyapunov exponents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one scenario")
    run_p.add_argument("target", help="preset name or path to a config/manifest file")
    run_p.add_argument("--out", help="output directory (default runs/<name>)")
    run_p.add_argument("--dt", type=float, help="integration step")
    run_p.add_argument("--steps", type=int, help="trajectory steps")
    run_p.add_argument("--x0", type=float, help="initial position")
    run_p.add_argument(
        "--strobe",
        help="poincare strobe: e3e1, e3e0, or an explicit angular frequency",
    )
    run_p.add_argument(
        "--outputs",
        help=f"comma list from: {','.join(scenarios.ALL_OUTPUTS)}",
    )
    run_p.add_argument(
        "--lyap-steps",
        type=int,
        dest="lyap_steps",
        help="Lyapunov horizon in steps (default 10000000; the published run is 50000000)",
    )

    sweep_p = sub.add_parser("sweep", help="re-run a preset over coefficient values")
    sweep_p.add_argument("target", metavar="preset", help="base preset name")
    sweep_p.add_argument("--coef", required=True, choices=("c1", "c2"))
    sweep_p.add_argument("--values", required=True, help="comma-separated values")
    sweep_p.add_argument("--out", help="output directory root")
    sweep_p.add_argument("--steps", type=int, help="trajectory steps per member")
    sweep_p.add_argument("--lyap-steps", type=int, dest="lyap_steps")
    sweep_p.add_argument("--strobe", help="strobe override for every member")
    sweep_p.add_argument("--outputs", help="outputs override for every member")

    sub.add_parser("list-presets", help="show built-in scenarios")
    return parser


def _resolve_target(target: str) -> scenarios.ScenarioConfig:
    if target in scenarios.PRESET_NAMES:
        return scenarios.preset(target)
    if Path(target).exists():
        return scenarios.load_config(target)
    raise scenarios.UnknownPreset(
        f"{target!r} is neither a preset ({', '.join(scenarios.PRESET_NAMES)}) "
        "nor an existing config file"
    )


def _apply_overrides(config: scenarios.ScenarioConfig, args) -> scenarios.ScenarioConfig:
    from dataclasses import replace

    updates = {}
    if getattr(args, "dt", None) is not None:
        updates["dt"] = args.dt
    if getattr(args, "steps", None) is not None:
        updates["n_steps"] = args.steps
    if getattr(args, "x0", None) is not None:
        updates["x0"] = args.x0
    if getattr(args, "lyap_steps", None) is not None:
        updates["lyap_steps"] = args.lyap_steps
    if getattr(args, "strobe", None) is not None:
        raw = args.strobe
        updates["strobe"] = raw if raw in ("e3e1", "e3e0") else float(raw)
    if getattr(args, "outputs", None) is not None:
        updates["outputs"] = tuple(p.strip() for p in args.outputs.split(",") if p.strip())
    return replace(config, **updates) if updates else config


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in scenarios.PRESET_NAMES:
                config = scenarios.preset(name)
                coeffs = ", ".join(
                    f"c{n}={c.real:g}{c.imag:+g}i" for n, c in enumerate(config.coefficients)
                )
                print(f"{name}: {coeffs}; x0 = {config.x0:g}, strobe = {config.strobe}")
            return EXIT_OK

        if args.command == "run":
            config = _apply_overrides(_resolve_target(args.target), args)
            manifest = scenarios.run(config, args.out)
            print(f"wrote {manifest.manifest_path}")
            for note in manifest.notes:
                print(f"note: {note}")
            if manifest.classification:
                print(f"classification: {manifest.classification}")
            if manifest.terminated_early:
                print(f"terminated early: {manifest.termination_reason}", file=sys.stderr)
                return EXIT_PHYSICS
            return EXIT_OK

        if args.command == "sweep":
            config = _apply_overrides(_resolve_target(args.target), args)
            index = int(args.coef[1])
            try:
                values = [float(v) for v in args.values.split(",") if v.strip()]
            except ValueError as exc:
                raise scenarios.ConfigError(f"bad --values: {exc}") from exc
            manifests = scenarios.sweep(config, index, values, args.out)
            for manifest in manifests:
                print(f"wrote {manifest.manifest_path}")
            if len(manifests) < len(values):
                print(
                    f"{len(values) - len(manifests)} sweep member(s) failed",
                    file=sys.stderr,
                )
                return EXIT_PHYSICS
            if any(m.terminated_early for m in manifests):
                return EXIT_PHYSICS
            return EXIT_OK

    except scenarios.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
