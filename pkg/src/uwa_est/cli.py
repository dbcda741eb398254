"""Command-line benchmark front end.

Three commands:

* ``uwa-est run`` — solve one instance and append a single-record results CSV;
* ``uwa-est sweep`` — sampling/SNR/norm grid over a block of seeds, emitting
  the results CSV, a per-cell summary CSV, per-norm gnuplot ``.dat`` files,
  a runtime-ratio CSV, and (unless ``--no-plots``) PNG figures;
* ``uwa-est export-channel`` — dump one generated channel instance as a
  sparse CSV fixture for cross-implementation checks.

Exit codes: 0 on success, 1 on invalid arguments (including argument values
rejected by the library), 2 on runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bench import (
    BenchConfig,
    NORM_CHOICES,
    SigmaPolicy,
    SolverTuning,
    SweepAxes,
    run_single,
    run_sweep,
    runtime_ratios,
    summarize,
    write_channel_csv,
    write_csv,
    write_dat_files,
    write_runtime_ratio_csv,
    write_summary,
)
from .channel_sim import ClusterSpec, NoiseSpec, generate_channel
from .norms import GroupLayout
from .operators import DelayDopplerGrid

PAPER_PRESET = {
    "doppler_bins": 11,
    "delay_taps": 200,
    "sampling_pcts": tuple(float(p) for p in range(10, 100, 10)),
    "snr_dbs": (10.0,),
    "norms": NORM_CHOICES,
}


class _UsageError(ValueError):
    """Bad argument values detected after parsing; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this harness pins 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_axis(text: str) -> tuple[float, ...]:
    """Parse a numeric sweep axis: 'a:b:step' range or comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise _UsageError(f"range axis must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise _UsageError("axis step must be positive")
        if stop < start:
            raise _UsageError("axis stop must not precede start")
        count = int((stop - start) / step + 1e-9) + 1
        return tuple(start + i * step for i in range(count))
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError as exc:
        raise _UsageError(f"cannot parse axis value list {text!r}") from exc


def _parse_norm_axis(text: str) -> tuple[str, ...]:
    norms = tuple(text.split(","))
    for norm in norms:
        if norm not in NORM_CHOICES:
            raise _UsageError(f"unknown norm {norm!r}; choose from {NORM_CHOICES}")
    if len(set(norms)) != len(norms):
        raise _UsageError("norm axis repeats a value")
    return norms


def _parse_sigma_l1(text: str) -> float | None:
    if text == "oracle":
        return None
    try:
        value = float(text)
    except ValueError as exc:
        raise _UsageError(f"--sigma-l1 must be 'oracle' or a number, got {text!r}") from exc
    return value


def _add_grid_args(parser: argparse.ArgumentParser, with_defaults: bool = True):
    parser.add_argument("--delay-taps", type=int, default=200 if with_defaults else None,
                        metavar="K", help="delay taps per Doppler bin (grid columns)")
    parser.add_argument("--doppler-bins", type=int, default=11 if with_defaults else None,
                        metavar="L", help="Doppler bins (grid rows)")


def _add_channel_args(parser: argparse.ArgumentParser):
    parser.add_argument("--clusters", type=int, default=3, metavar="N",
                        help="number of tap clusters")
    parser.add_argument("--taps-per-cluster", type=int, default=5, metavar="N",
                        help="contiguous delay taps per cluster")
    parser.add_argument("--doppler-spread", type=int, default=1, metavar="N",
                        help="extra adjacent Doppler rows per cluster")
    parser.add_argument("--scatter", action="store_true",
                        help="place isolated taps uniformly instead of clusters")


def _add_solver_args(parser: argparse.ArgumentParser):
    parser.add_argument("--group-layout", choices=[g.value for g in GroupLayout],
                        default=GroupLayout.ROWS.value,
                        help="grouping direction for the mixed norm")
    parser.add_argument("--sigma-l1", default="oracle", metavar="{oracle|<value>}",
                        help="l1-ball radius: 'oracle' uses the true channel's l1 norm")
    parser.add_argument("--eta", type=float, default=1.0, metavar="<value>",
                        help="fidelity-radius scale: sigma = eta * m * noise_std^2")
    parser.add_argument("--max-iters", type=int, default=2000, metavar="N",
                        help="solver iteration cap")
    parser.add_argument("--tol", type=float, default=1e-6, metavar="X",
                        help="solver stopping tolerance")


def _build_parser() -> _Parser:
    parser = _Parser(prog="uwa-est",
                     description="Sparse delay-Doppler channel estimation benchmark.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    run_p = sub.add_parser("run", help="solve one instance and write a one-record CSV")
    _add_grid_args(run_p)
    run_p.add_argument("--sampling", type=float, default=50.0, metavar="PCT",
                       help="percentage of Fourier samples kept by the mask")
    run_p.add_argument("--snr-db", type=float, default=10.0, metavar="X",
                       help="per-entry signal-to-noise ratio in dB")
    run_p.add_argument("--norm", choices=list(NORM_CHOICES), required=True,
                       help="recovery program: l1 ball or l21 fidelity")
    run_p.add_argument("--seed", type=int, default=0, metavar="N",
                       help="master seed for channel, mask, and noise")
    _add_solver_args(run_p)
    _add_channel_args(run_p)
    run_p.add_argument("--out", required=True, metavar="FILE.csv",
                       help="results CSV to write")
    run_p.set_defaults(handler=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="grid of runs over sampling/SNR/norm/seeds")
    sweep_p.add_argument("--preset", choices=["paper"],
                         help="pinned benchmark grid: 11x200, SNR 10 dB, "
                              "sampling 10..90 step 10, both norms")
    _add_grid_args(sweep_p, with_defaults=False)
    sweep_p.add_argument("--sampling", metavar="A:B:STEP|LIST",
                         help="sampling axis, e.g. 10:90:10 or 30,50,70")
    sweep_p.add_argument("--snr-db", metavar="LIST", dest="snr_db",
                         help="SNR axis in dB, e.g. 0,10,20")
    sweep_p.add_argument("--norm", metavar="LIST", help="norm axis, e.g. l1,l21")
    sweep_p.add_argument("--seeds", type=int, default=20, metavar="N",
                         help="seeds 0..N-1 per cell")
    _add_solver_args(sweep_p)
    _add_channel_args(sweep_p)
    sweep_p.add_argument("--out", required=True, metavar="FILE.csv",
                         help="results CSV to write")
    sweep_p.add_argument("--summary", metavar="FILE.csv",
                         help="summary CSV (default: summary_<out> in the same directory)")
    sweep_p.add_argument("--plots", action=argparse.BooleanOptionalAction, default=True,
                         help="render PNG figures next to the summary")
    sweep_p.set_defaults(handler=_cmd_sweep)

    export_p = sub.add_parser("export-channel",
                              help="write one generated channel as a sparse CSV fixture")
    export_p.add_argument("--seed", type=int, default=0, metavar="N",
                          help="channel master seed")
    _add_grid_args(export_p)
    _add_channel_args(export_p)
    export_p.add_argument("--out", required=True, metavar="FILE.csv",
                          help="fixture CSV to write")
    export_p.set_defaults(handler=_cmd_export)

    return parser


def _lift_value_errors(build):
    """Run a config constructor, turning ValueError into a usage error."""
    try:
        return build()
    except _UsageError:
        raise
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _tuning_from(args) -> SolverTuning:
    return SolverTuning(
        max_iters=args.max_iters,
        tol=args.tol,
        group_layout=GroupLayout(args.group_layout),
    )


def _cmd_run(args) -> None:
    def build():
        grid = DelayDopplerGrid(doppler_bins=args.doppler_bins, delay_taps=args.delay_taps)
        cluster = ClusterSpec(
            n_clusters=args.clusters,
            taps_per_cluster=args.taps_per_cluster,
            doppler_spread_bins=args.doppler_spread,
            rng_seed=args.seed,
            scatter=args.scatter,
        )
        noise = NoiseSpec(snr_db=args.snr_db, rng_seed=args.seed)
        policy = SigmaPolicy(sigma_l1=_parse_sigma_l1(args.sigma_l1), eta=args.eta)
        if not 0 < args.sampling <= 100:
            raise _UsageError("--sampling must lie in (0, 100]")
        return grid, cluster, noise, policy, _tuning_from(args)

    grid, cluster, noise, policy, tuning = _lift_value_errors(build)
    record = run_single(grid, cluster, noise, args.sampling, args.norm, tuning, policy)
    write_csv([record], args.out)
    print(
        f"seed={record.seed} norm={record.norm} sampling={record.sampling_pct:g} "
        f"snr_db={record.snr_db:g} mse={record.mse:.6e} iterations={record.iterations} "
        f"runtime={record.runtime_seconds:.3f}s "
        f"converged={'true' if record.converged else 'false'}"
    )
    print(f"wrote {args.out}")


def _cmd_sweep(args) -> None:
    def build():
        if args.preset == "paper":
            pinned = {
                "--sampling": args.sampling, "--snr-db": args.snr_db,
                "--norm": args.norm, "--delay-taps": args.delay_taps,
                "--doppler-bins": args.doppler_bins,
            }
            clashes = sorted(flag for flag, value in pinned.items() if value is not None)
            if clashes:
                raise _UsageError(
                    f"--preset paper pins {', '.join(clashes)}; drop those flags"
                )
            axes = SweepAxes(
                sampling_pcts=PAPER_PRESET["sampling_pcts"],
                snr_dbs=PAPER_PRESET["snr_dbs"],
                norms=PAPER_PRESET["norms"],
            )
            grid = DelayDopplerGrid(
                doppler_bins=PAPER_PRESET["doppler_bins"],
                delay_taps=PAPER_PRESET["delay_taps"],
            )
        else:
            axes = SweepAxes(
                sampling_pcts=_parse_axis(args.sampling) if args.sampling else
                PAPER_PRESET["sampling_pcts"],
                snr_dbs=_parse_axis(args.snr_db) if args.snr_db else
                PAPER_PRESET["snr_dbs"],
                norms=_parse_norm_axis(args.norm) if args.norm else
                PAPER_PRESET["norms"],
            )
            grid = DelayDopplerGrid(
                doppler_bins=args.doppler_bins if args.doppler_bins is not None
                else PAPER_PRESET["doppler_bins"],
                delay_taps=args.delay_taps if args.delay_taps is not None
                else PAPER_PRESET["delay_taps"],
            )
        base = BenchConfig(
            grid=grid,
            n_clusters=args.clusters,
            taps_per_cluster=args.taps_per_cluster,
            doppler_spread_bins=args.doppler_spread,
            scatter=args.scatter,
            tuning=_tuning_from(args),
            sigma_policy=SigmaPolicy(sigma_l1=_parse_sigma_l1(args.sigma_l1), eta=args.eta),
        )
        if args.seeds < 1:
            raise _UsageError("--seeds must be at least 1")
        return axes, base

    axes, base = _lift_value_errors(build)

    cell_counts: dict[tuple[float, float, str], int] = {}

    def progress(record):
        key = (record.sampling_pct, record.snr_db, record.norm)
        cell_counts[key] = cell_counts.get(key, 0) + 1
        if cell_counts[key] == args.seeds:
            print(
                f"cell sampling={key[0]:g} snr_db={key[1]:g} norm={key[2]}: "
                f"{args.seeds} runs done",
                file=sys.stderr,
            )

    records = run_sweep(axes, base, args.seeds, progress=progress)
    write_csv(records, args.out)

    summary_path = (
        Path(args.summary)
        if args.summary
        else Path(args.out).parent / f"summary_{Path(args.out).name}"
    )
    rows = summarize(records)
    write_summary(rows, summary_path)
    dat_paths = write_dat_files(rows, summary_path)
    stem = summary_path.with_suffix("")
    ratio_path = Path(f"{stem}_runtime_ratio.csv")
    write_runtime_ratio_csv(rows, ratio_path)

    outputs = [Path(args.out), summary_path, *dat_paths, ratio_path]
    if args.plots:
        from .plotting import plot_mse_vs_sampling, plot_runtime_vs_sampling

        outputs.append(plot_mse_vs_sampling(rows, Path(f"{stem}_mse.png")))
        outputs.append(plot_runtime_vs_sampling(rows, Path(f"{stem}_runtime.png")))

    print(f"{len(records)} records")
    for pct, ratio in runtime_ratios(rows):
        print(f"runtime ratio l21/l1 at sampling {pct:g}: {ratio:.3f}")
    for path in outputs:
        print(f"wrote {path}")


def _cmd_export(args) -> None:
    def build():
        grid = DelayDopplerGrid(doppler_bins=args.doppler_bins, delay_taps=args.delay_taps)
        cluster = ClusterSpec(
            n_clusters=args.clusters,
            taps_per_cluster=args.taps_per_cluster,
            doppler_spread_bins=args.doppler_spread,
            rng_seed=args.seed,
            scatter=args.scatter,
        )
        return grid, cluster

    grid, cluster = _lift_value_errors(build)
    channel = generate_channel(grid, cluster)
    write_channel_csv(channel, args.out)
    print(f"wrote {args.out} ({int(np.count_nonzero(channel.values))} entries)")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "handler", None) is None:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: a command is required", file=sys.stderr)
        return 1
    try:
        args.handler(args)
    except _UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - boundary: report and set exit code
        print(f"{parser.prog}: runtime failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
