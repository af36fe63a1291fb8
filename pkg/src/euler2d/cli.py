"""Command-line entry point.

Subcommands: run, compare, radius (offline fit on a norms CSV), spectrum.
Exit codes: 0 success, 2 config error, 3 numerical failure, 4 reversion
failure.
"""

import argparse
import os
import sys

import numpy as np

from . import diagnostics, io, runner, spectral
from .errors import ConfigError, InsufficientDataError, NumericalError, ReversionError


def _add_run_parser(sub):
    p = sub.add_parser("run", help="integrate the 2D Euler equation")
    p.add_argument("--method", choices=runner.METHODS, default="CL")
    p.add_argument("--order", type=int, default=8, help="Taylor order for CL/ET")
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--epsilon", type=float, default=1e-12)
    p.add_argument("--dt", type=float, default=None,
                   help="fixed step (RK/ET) or step cap (CL)")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--initial", choices=runner.INITIALS, default="four_mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial-file", default=None)
    p.add_argument("--auto-order", action="store_true")
    p.add_argument("--output-cadence", type=int, default=10)
    p.add_argument("--radius-cadence", type=int, default=10)
    p.add_argument("--radius-depth", type=int, default=40)
    p.add_argument("--checkpoint-cadence", type=int, default=0)
    p.add_argument("--output-dir", required=True)


def _add_compare_parser(sub):
    p = sub.add_parser("compare", help="discrepancy table between two runs")
    p.add_argument("dir_a")
    p.add_argument("dir_b")
    p.add_argument("--output-dir", required=True)


def _add_radius_parser(sub):
    p = sub.add_parser("radius", help="fit a norms CSV for the convergence radius")
    p.add_argument("norms_csv")
    p.add_argument("--s-min", type=int, default=10)
    p.add_argument("--s-max", type=int, default=None)


def _add_spectrum_parser(sub):
    p = sub.add_parser("spectrum", help="enstrophy shells of a field file")
    p.add_argument("field_file")
    p.add_argument("--output-dir", required=True)


def _cmd_run(args):
    config = runner.RunConfig(
        method=args.method,
        order=args.order,
        n=args.n,
        epsilon=args.epsilon,
        dt=args.dt,
        t_end=args.t_end,
        initial=args.initial,
        seed=args.seed,
        initial_path=args.initial_file,
        auto_order=args.auto_order,
        output_cadence=args.output_cadence,
        radius_cadence=args.radius_cadence,
        radius_depth=args.radius_depth,
        checkpoint_cadence=args.checkpoint_cadence,
    )
    artifacts = runner.run(config, output_dir=args.output_dir)
    print(
        f"{args.method} finished at t={artifacts.t:.6f} "
        f"after {len(artifacts.steps)} steps -> {args.output_dir}"
    )


def _cmd_compare(args):
    os.makedirs(args.output_dir, exist_ok=True)
    out = os.path.join(args.output_dir, "discrepancy.csv")
    header, rows = runner.compare_dirs(args.dir_a, args.dir_b, out)
    print(",".join(header))
    for row in rows:
        print(",".join(f"{v:.6e}" if isinstance(v, float) else str(v) for v in row))


def _cmd_radius(args):
    _, rows = io.read_csv(args.norms_csv)
    norms = np.array([row[1] for row in rows], dtype=float)
    s_max = args.s_max or len(norms)
    report = diagnostics.fit_log_linear(norms, (args.s_min, s_max))
    estimators = diagnostics.radius_estimators(norms)
    print(f"radius={report.radius:.6f} alpha={report.alpha:.4f} "
          f"beta={report.beta:.4f} gamma={report.gamma:.4f}")
    print(f"hadamard={estimators['hadamard']:.6f} ratio={estimators['ratio']:.6f}")


def _cmd_spectrum(args):
    values, t = io.read_field(args.field_file)
    if values.ndim != 2:
        raise ConfigError("spectrum expects a scalar field file")
    shells = diagnostics.vorticity_spectrum(spectral.forward(values)).shells
    os.makedirs(args.output_dir, exist_ok=True)
    out = os.path.join(args.output_dir, "spectrum.csv")
    io.write_csv(out, ["K", "E_omega"], list(enumerate(shells)))
    print(f"wrote {out} (t={t:g}, {len(shells)} shells)")


def main(argv=None):
    parser = argparse.ArgumentParser(prog="euler2d")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run_parser(sub)
    _add_compare_parser(sub)
    _add_radius_parser(sub)
    _add_spectrum_parser(sub)
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "compare": _cmd_compare,
        "radius": _cmd_radius,
        "spectrum": _cmd_spectrum,
    }
    try:
        handlers[args.command](args)
    except (ConfigError, InsufficientDataError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ReversionError as exc:
        print(f"reversion failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
