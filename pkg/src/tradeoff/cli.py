"""Command-line front end.

Subcommands
-----------
stats    print the ensemble's entropic summary (S, Sbar, chi, H)
qct      classical-channel trade-off curve Q*(R) -> CSV + channel sidecar
rsp      remote-state-preparation curve E*(R) -> CSV + channel sidecar
surface  full (R, Q) -> E* grid -> CSV + metadata JSON
verify   cross-check the surface against the achievability oracle -> report
plot     emit a gnuplot script rendering a surface CSV

Exit codes: 0 success; 1 bad input; 2 optimizer diagnostics raised;
3 verification gaps above tolerance.
"""

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import export
from .achievability import achievable_hull, verify_surface
from .ensembles import BUILTIN_NAMES, builtin_ensemble, load_ensemble
from .optimizer import qct_curve, rsp_curve
from .states import ensemble_stats
from .surface import surface_grid

DEFAULT_GRID = (16, 16)
DEFAULT_TOLERANCE = 2e-2


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs; identical configs give identical files."""

    command: str
    ensemble_path: str | None = None
    builtin: str | None = None
    out: str | None = None
    grid: tuple[int, int] = DEFAULT_GRID
    resolution: int = 40
    seed: int = 0
    multistarts: int = 32
    tolerance: float = DEFAULT_TOLERANCE
    workers: int | None = None
    depth: int = 2
    samples: int = 128
    surface_path: str | None = None


def resolve_workers(requested: int | None = None) -> int:
    """Pool size: TRADEOFF_THREADS beats the flag, which beats cpu count."""
    env = os.environ.get("TRADEOFF_THREADS")
    if env is not None:
        try:
            requested = int(env)
        except ValueError as exc:
            raise ValueError(f"TRADEOFF_THREADS={env!r} is not an integer") from exc
    if requested is None:
        return os.cpu_count() or 1
    if requested < 1:
        raise ValueError("worker count must be >= 1")
    return requested


def _load_ensemble(config: RunConfig):
    if config.ensemble_path is not None:
        return load_ensemble(config.ensemble_path)
    if config.builtin is not None:
        return builtin_ensemble(config.builtin)
    raise ValueError("an ensemble is required (--ensemble PATH or --builtin NAME)")


def _dispatch(config: RunConfig) -> int:
    if config.command == "plot":
        rows = export.read_surface_csv(config.surface_path)
        script = export.gnuplot_surface_script(rows)
        Path(config.out).write_text(script, encoding="utf-8")
        print(f"wrote {config.out}")
        return 0

    ensemble = _load_ensemble(config)
    if config.command == "stats":
        stats = ensemble_stats(ensemble)
        print(f"states = {ensemble.m}  dimA = {ensemble.dimA}  "
              f"dimB = {ensemble.dimB}")
        for name, value in (("S", stats.S), ("Sbar", stats.Sbar),
                            ("chi", stats.chi), ("H", stats.H)):
            print(f"{name} = {value:.12g}")
        return 0

    workers = resolve_workers(config.workers)
    if config.command in ("qct", "rsp"):
        solver = qct_curve if config.command == "qct" else rsp_curve
        curve = solver(ensemble, config.resolution,
                       multistarts=config.multistarts, seed=config.seed,
                       workers=workers)
        export.write_curve_csv(curve, config.out)
        print(f"wrote {config.out} ({len(curve.samples)} support points, "
              f"domain [{curve.domain[0]:.6g}, {curve.domain[1]:.6g}])")
        for note in curve.diagnostics:
            print(f"diagnostic: {note}", file=sys.stderr)
        return 2 if curve.diagnostics else 0

    nR, nQ = config.grid
    grid = surface_grid(ensemble, nR, nQ, resolution=config.resolution,
                        multistarts=config.multistarts, seed=config.seed,
                        workers=workers)
    for note in grid.diagnostics:
        print(f"diagnostic: {note}", file=sys.stderr)

    if config.command == "surface":
        export.write_surface_csv(grid, ensemble, config.out)
        print(f"wrote {config.out} ({nR}x{nQ} cells)")
        return 2 if grid.diagnostics else 0

    hull = achievable_hull(grid.curves, depth=config.depth,
                           n_samples=config.samples)
    report = verify_surface(grid, hull, tolerance=config.tolerance)
    export.write_verification_report(report, config.out)
    print(f"wrote {config.out}: max |gap| = {report['max_abs_gap']:.3e} over "
          f"{hull.size} points, tolerance {config.tolerance:g}")
    for violation in report["violations"]:
        print(f"violation: {violation}", file=sys.stderr)
    if grid.diagnostics:
        return 2
    return 3 if report["violations"] else 0


def run(config: RunConfig) -> int:
    try:
        return _dispatch(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _grid_type(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("grid must look like 16x16")
    try:
        nR, nQ = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError("grid must look like 16x16") from exc
    if nR < 2 or nQ < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return nR, nQ


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 (bad input); 2 is reserved for solver diagnostics."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_ensemble_args(parser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--ensemble", metavar="PATH",
                       help="ensemble JSON file")
    group.add_argument("--builtin", metavar="NAME",
                       help=f"one of {', '.join(BUILTIN_NAMES)}, "
                            "or uniform-qubit-N")


def _add_solver_args(parser) -> None:
    parser.add_argument("--resolution", type=int, default=40, metavar="N",
                        help="size of the multiplier ladder (default 40)")
    parser.add_argument("--seed", type=int, default=0, metavar="N",
                        help="base seed for multistart draws (default 0)")
    parser.add_argument("--multistarts", type=int, default=32, metavar="N",
                        help="random restarts per multiplier (default 32)")
    parser.add_argument("--workers", type=int, default=None, metavar="N",
                        help="worker pool size (default: all cores; the "
                             "TRADEOFF_THREADS env var overrides)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tradeoff",
                     description="Trade-off curves and the E*(R, Q) surface "
                                 "for ensembles of bipartite pure states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", parents=[], help="print S, Sbar, chi, H")
    _add_ensemble_args(p_stats)

    for name, blurb in (("qct", "classical-channel curve Q*(R)"),
                        ("rsp", "remote-preparation curve E*(R)")):
        p_curve = sub.add_parser(name, help=f"compute the {blurb}")
        _add_ensemble_args(p_curve)
        _add_solver_args(p_curve)
        p_curve.add_argument("--out", required=True, metavar="PATH",
                             help="output CSV path")

    p_surface = sub.add_parser("surface", help="compute the E*(R, Q) grid")
    _add_ensemble_args(p_surface)
    _add_solver_args(p_surface)
    p_surface.add_argument("--grid", type=_grid_type, default=DEFAULT_GRID,
                           metavar="NRxNQ", help="grid size (default 16x16)")
    p_surface.add_argument("--out", required=True, metavar="PATH",
                           help="output CSV path")

    p_verify = sub.add_parser("verify",
                              help="cross-check the surface against the "
                                   "achievability oracle")
    _add_ensemble_args(p_verify)
    _add_solver_args(p_verify)
    p_verify.add_argument("--grid", type=_grid_type, default=DEFAULT_GRID,
                          metavar="NRxNQ", help="grid size (default 16x16)")
    p_verify.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                          metavar="X", help="max allowed |minE - E*| "
                          f"(default {DEFAULT_TOLERANCE:g})")
    p_verify.add_argument("--depth", type=int, default=2, metavar="N",
                          help="conversion chain depth (default 2)")
    p_verify.add_argument("--samples", type=int, default=128, metavar="N",
                          help="rate samples per primitive family (default 128)")
    p_verify.add_argument("--out", required=True, metavar="PATH",
                          help="output report JSON path")

    p_plot = sub.add_parser("plot", help="emit a gnuplot script for a "
                                         "surface CSV")
    p_plot.add_argument("--surface", required=True, metavar="PATH",
                        help="surface CSV produced by the surface command")
    p_plot.add_argument("--out", required=True, metavar="PATH",
                        help="output gnuplot script path")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        ensemble_path=getattr(args, "ensemble", None),
        builtin=getattr(args, "builtin", None),
        out=getattr(args, "out", None),
        grid=getattr(args, "grid", DEFAULT_GRID),
        resolution=getattr(args, "resolution", 40),
        seed=getattr(args, "seed", 0),
        multistarts=getattr(args, "multistarts", 32),
        tolerance=getattr(args, "tolerance", DEFAULT_TOLERANCE),
        workers=getattr(args, "workers", None),
        depth=getattr(args, "depth", 2),
        samples=getattr(args, "samples", 128),
        surface_path=getattr(args, "surface", None),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
