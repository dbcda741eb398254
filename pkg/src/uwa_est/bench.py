"""Benchmark harness: run estimation experiments, record results, aggregate.

A single experiment is one (channel draw, mask, noise draw, solver) pipeline
producing an :class:`ExperimentRecord`. Sweeps take the Cartesian product of
sampling percentage, SNR, and norm choice over a block of seeds, in canonical
order, and never abort on a single failed run — failures become rows with an
empty mse field.

File formats (all stable interfaces):

* results CSV — header ``seed,norm,L,K,sampling_pct,snr_db,sigma_used,
  group_layout,mse,iterations,runtime_seconds,converged``, reals printed with
  17 significant digits so parsing reproduces them bit-exactly, NaN encoded
  as an empty field, booleans as ``true``/``false``;
* summary CSV — one row per (norm, sampling_pct) cell with lower-median MSE
  and runtime over the converged rows plus the converged fraction;
* per-norm ``.dat`` — the same summary as whitespace-delimited columns for
  gnuplot;
* runtime-ratio CSV — median-runtime ratio l21/l1 per sampling cell;
* channel fixture CSV — sparse ``row,col,re,im`` dump of a channel instance
  for cross-implementation comparisons.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .channel_sim import ClusterSpec, NoiseSpec, generate_channel, add_awgn
from .norms import GroupLayout, norm_l1
from .operators import ChannelGrid, DelayDopplerGrid, Measurement, forward_model, make_mask
from .solvers import (
    SolverConfig,
    relative_mse,
    sigma_from_noise,
    solve_l1_constrained,
    solve_l21_fidelity,
)

NORM_CHOICES = ("l1", "l21")

CSV_HEADER = (
    "seed",
    "norm",
    "L",
    "K",
    "sampling_pct",
    "snr_db",
    "sigma_used",
    "group_layout",
    "mse",
    "iterations",
    "runtime_seconds",
    "converged",
)

SUMMARY_HEADER = (
    "norm",
    "sampling_pct",
    "median_mse",
    "median_runtime_seconds",
    "converged_frac",
)

RATIO_HEADER = ("sampling_pct", "runtime_ratio_l21_over_l1")

CHANNEL_HEADER = ("row", "col", "re", "im")


@dataclass(frozen=True)
class ExperimentRecord:
    """One solved instance, with everything needed to rerun it exactly."""

    seed: int
    norm: str
    L: int
    K: int
    sampling_pct: float
    snr_db: float
    sigma_used: float
    group_layout: str
    mse: float
    iterations: int
    runtime_seconds: float
    converged: bool

    def __post_init__(self):
        if self.norm not in NORM_CHOICES:
            raise ValueError(f"norm must be one of {NORM_CHOICES}")
        if not math.isnan(self.mse) and self.mse < 0:
            raise ValueError("mse must be nonnegative")
        if self.runtime_seconds < 0:
            raise ValueError("runtime_seconds must be nonnegative")


@dataclass(frozen=True)
class SolverTuning:
    """Solver knobs that do not depend on the generated instance."""

    max_iters: int = 2000
    tol: float = 1e-6
    step_scale: float = 1.0
    admm_rho: float = 1.0
    group_layout: GroupLayout = GroupLayout.ROWS

    def config(self, sigma: float) -> SolverConfig:
        return SolverConfig(
            sigma=sigma,
            max_iters=self.max_iters,
            tol=self.tol,
            step_scale=self.step_scale,
            admm_rho=self.admm_rho,
            group_layout=self.group_layout,
        )


@dataclass(frozen=True)
class SigmaPolicy:
    """How the constraint radius is chosen per instance.

    ``sigma_l1 is None`` means the oracle policy: use the true channel's
    l1 norm as the ball radius. The fidelity radius for the mixed-norm
    problem is always ``eta * m * noise_std**2``.
    """

    sigma_l1: float | None = None
    eta: float = 1.0

    def __post_init__(self):
        if self.sigma_l1 is not None and self.sigma_l1 <= 0:
            raise ValueError("sigma_l1 must be positive when given")
        if self.eta <= 0:
            raise ValueError("eta must be positive")


@dataclass(frozen=True)
class SweepAxes:
    sampling_pcts: tuple[float, ...]
    snr_dbs: tuple[float, ...]
    norms: tuple[str, ...] = NORM_CHOICES

    def __post_init__(self):
        if not self.sampling_pcts or not self.snr_dbs or not self.norms:
            raise ValueError("every sweep axis needs at least one value")
        for norm in self.norms:
            if norm not in NORM_CHOICES:
                raise ValueError(f"norm must be one of {NORM_CHOICES}")
        for pct in self.sampling_pcts:
            if not 0 < pct <= 100:
                raise ValueError("sampling_pct must lie in (0, 100]")


@dataclass(frozen=True)
class BenchConfig:
    """Everything about a sweep that is not a sweep axis or a seed."""

    grid: DelayDopplerGrid
    n_clusters: int = 3
    taps_per_cluster: int = 5
    doppler_spread_bins: int = 1
    amplitude_decay: float = 0.8
    scatter: bool = False
    tuning: SolverTuning = field(default_factory=SolverTuning)
    sigma_policy: SigmaPolicy = field(default_factory=SigmaPolicy)

    def cluster_spec(self, seed: int) -> ClusterSpec:
        return ClusterSpec(
            n_clusters=self.n_clusters,
            taps_per_cluster=self.taps_per_cluster,
            doppler_spread_bins=self.doppler_spread_bins,
            amplitude_decay=self.amplitude_decay,
            rng_seed=seed,
            scatter=self.scatter,
        )


def run_single(
    grid: DelayDopplerGrid,
    cluster_spec: ClusterSpec,
    noise_spec: NoiseSpec,
    sampling_pct: float,
    norm_choice: str,
    tuning: SolverTuning | None = None,
    sigma_policy: SigmaPolicy | None = None,
    *,
    masked: bool | None = None,
) -> ExperimentRecord:
    """Generate one instance, solve it, and record the outcome.

    The l1 path measures through a random sampling mask; the mixed-norm path
    measures the full Fourier plane (``masked`` overrides either default).
    Channel, mask, and noise draw from independent streams of one master
    seed, so the record's seed alone reruns the instance.
    """
    if norm_choice not in NORM_CHOICES:
        raise ValueError(f"norm must be one of {NORM_CHOICES}")
    if cluster_spec.rng_seed != noise_spec.rng_seed:
        raise ValueError(
            "cluster and noise specs must share one master seed so the record "
            "stays rerunnable from a single seed field"
        )
    tuning = tuning if tuning is not None else SolverTuning()
    sigma_policy = sigma_policy if sigma_policy is not None else SigmaPolicy()
    seed = cluster_spec.rng_seed
    use_mask = (norm_choice == "l1") if masked is None else bool(masked)

    try:
        truth = generate_channel(grid, cluster_spec)
        mask = make_mask(grid, sampling_pct, seed) if use_mask else None
        clean = forward_model(truth, mask)
        noisy, noise_std = add_awgn(clean, noise_spec, mask)
        m_samples = mask.cardinality if mask is not None else grid.size
        if norm_choice == "l1":
            sigma = (
                sigma_policy.sigma_l1
                if sigma_policy.sigma_l1 is not None
                else norm_l1(truth.values)
            )
        else:
            sigma = sigma_from_noise(noise_std, m_samples, sigma_policy.eta)
        meas = Measurement(grid=grid, values=noisy, mask=mask, snr_db=noise_spec.snr_db)
        solve = solve_l1_constrained if norm_choice == "l1" else solve_l21_fidelity
        report = solve(meas, tuning.config(sigma))
        mse = relative_mse(report.estimate, truth)
    except Exception as exc:
        context = (
            f"seed={seed} norm={norm_choice} L={grid.doppler_bins} "
            f"K={grid.delay_taps} sampling_pct={sampling_pct} "
            f"snr_db={noise_spec.snr_db}"
        )
        try:
            annotated = type(exc)(f"{exc} [{context}]")
        except Exception:
            raise exc from None
        raise annotated from exc

    return ExperimentRecord(
        seed=seed,
        norm=norm_choice,
        L=grid.doppler_bins,
        K=grid.delay_taps,
        sampling_pct=float(sampling_pct),
        snr_db=float(noise_spec.snr_db),
        sigma_used=float(sigma),
        group_layout=tuning.group_layout.value,
        mse=float(mse),
        iterations=report.iterations_used,
        runtime_seconds=report.runtime_seconds,
        converged=report.converged,
    )


def _failed_record(
    grid: DelayDopplerGrid,
    seed: int,
    norm_choice: str,
    sampling_pct: float,
    snr_db: float,
    layout: GroupLayout,
) -> ExperimentRecord:
    return ExperimentRecord(
        seed=seed,
        norm=norm_choice,
        L=grid.doppler_bins,
        K=grid.delay_taps,
        sampling_pct=float(sampling_pct),
        snr_db=float(snr_db),
        sigma_used=float("nan"),
        group_layout=layout.value,
        mse=float("nan"),
        iterations=0,
        runtime_seconds=0.0,
        converged=False,
    )


def run_sweep(
    axes: SweepAxes,
    base: BenchConfig,
    n_seeds: int,
    progress: Callable[[ExperimentRecord], None] | None = None,
) -> list[ExperimentRecord]:
    """Cartesian product of axes x seeds, one record each, canonical order.

    Order is sampling_pct-major, then snr_db, then norm, then seed. A failed
    run (e.g. cluster placement exhaustion) becomes a row with converged
    false and an empty mse; the sweep continues. ``progress`` is invoked
    with each record as it lands.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be at least 1")
    records: list[ExperimentRecord] = []
    for pct in axes.sampling_pcts:
        for snr_db in axes.snr_dbs:
            for norm_choice in axes.norms:
                for seed in range(n_seeds):
                    try:
                        record = run_single(
                            base.grid,
                            base.cluster_spec(seed),
                            NoiseSpec(snr_db=snr_db, rng_seed=seed),
                            pct,
                            norm_choice,
                            base.tuning,
                            base.sigma_policy,
                        )
                    except Exception:
                        record = _failed_record(
                            base.grid, seed, norm_choice, pct, snr_db,
                            base.tuning.group_layout,
                        )
                    records.append(record)
                    if progress is not None:
                        progress(record)
    return records


@dataclass(frozen=True)
class SummaryRow:
    """Aggregate of one (norm, sampling_pct) cell.

    Medians are taken over the converged rows only (lower-median convention
    for even counts) and are NaN when the cell has no converged row; the
    converged fraction counts against all rows in the cell.
    """

    norm: str
    sampling_pct: float
    median_mse: float
    median_runtime_seconds: float
    converged_frac: float


def _lower_median(values: list[float]) -> float:
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def summarize(records: list[ExperimentRecord]) -> list[SummaryRow]:
    """Collapse records into per-(norm, sampling_pct) summary rows."""
    if not records:
        raise ValueError("no records to summarize")
    cells: dict[tuple[str, float], list[ExperimentRecord]] = {}
    for record in records:
        cells.setdefault((record.norm, record.sampling_pct), []).append(record)
    rows = []
    for norm_choice, pct in sorted(cells):
        group = cells[(norm_choice, pct)]
        converged = [r for r in group if r.converged]
        if converged:
            median_mse = _lower_median([r.mse for r in converged])
            median_runtime = _lower_median([r.runtime_seconds for r in converged])
        else:
            median_mse = float("nan")
            median_runtime = float("nan")
        rows.append(
            SummaryRow(
                norm=norm_choice,
                sampling_pct=pct,
                median_mse=median_mse,
                median_runtime_seconds=median_runtime,
                converged_frac=len(converged) / len(group),
            )
        )
    return rows


def _fmt_real(x: float) -> str:
    if math.isnan(x):
        return ""
    return f"{x:.17g}"


def _parse_real(text: str) -> float:
    return float("nan") if text == "" else float(text)


def write_csv(records: list[ExperimentRecord], path: str | Path) -> None:
    """Write records as UTF-8 CSV with round-trippable reals."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                (
                    str(r.seed),
                    r.norm,
                    str(r.L),
                    str(r.K),
                    _fmt_real(r.sampling_pct),
                    _fmt_real(r.snr_db),
                    _fmt_real(r.sigma_used),
                    r.group_layout,
                    _fmt_real(r.mse),
                    str(r.iterations),
                    _fmt_real(r.runtime_seconds),
                    "true" if r.converged else "false",
                )
            )


def read_csv(path: str | Path) -> list[ExperimentRecord]:
    """Parse a results CSV back into records (inverse of :func:`write_csv`)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected results header: {header}")
        records = []
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"expected {len(CSV_HEADER)} fields, got {len(row)}")
            records.append(
                ExperimentRecord(
                    seed=int(row[0]),
                    norm=row[1],
                    L=int(row[2]),
                    K=int(row[3]),
                    sampling_pct=_parse_real(row[4]),
                    snr_db=_parse_real(row[5]),
                    sigma_used=_parse_real(row[6]),
                    group_layout=row[7],
                    mse=_parse_real(row[8]),
                    iterations=int(row[9]),
                    runtime_seconds=_parse_real(row[10]),
                    converged=row[11] == "true",
                )
            )
    return records


def write_summary(rows: list[SummaryRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for row in rows:
            writer.writerow(
                (
                    row.norm,
                    _fmt_real(row.sampling_pct),
                    _fmt_real(row.median_mse),
                    _fmt_real(row.median_runtime_seconds),
                    _fmt_real(row.converged_frac),
                )
            )


def read_summary(path: str | Path) -> list[SummaryRow]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != SUMMARY_HEADER:
            raise ValueError(f"unexpected summary header: {header}")
        return [
            SummaryRow(
                norm=row[0],
                sampling_pct=_parse_real(row[1]),
                median_mse=_parse_real(row[2]),
                median_runtime_seconds=_parse_real(row[3]),
                converged_frac=_parse_real(row[4]),
            )
            for row in reader
        ]


def write_dat_files(rows: list[SummaryRow], summary_path: str | Path) -> list[Path]:
    """Emit one whitespace-delimited .dat per norm next to the summary CSV.

    Columns are sampling_pct, median_mse, median_runtime_seconds, and
    converged_frac; missing medians appear as ``nan`` (gnuplot skips them
    with ``set datafile missing "nan"``).
    """
    stem = Path(summary_path).with_suffix("")
    written = []
    for norm_choice in NORM_CHOICES:
        subset = [row for row in rows if row.norm == norm_choice]
        if not subset:
            continue
        path = Path(f"{stem}_{norm_choice}.dat")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# sampling_pct median_mse median_runtime_seconds converged_frac\n")
            for row in subset:
                fh.write(
                    f"{row.sampling_pct:.17g} {row.median_mse:.17g} "
                    f"{row.median_runtime_seconds:.17g} {row.converged_frac:.17g}\n"
                )
        written.append(path)
    return written


def runtime_ratios(rows: list[SummaryRow]) -> list[tuple[float, float]]:
    """(sampling_pct, median-runtime ratio l21/l1) for cells with both norms."""
    runtimes: dict[float, dict[str, float]] = {}
    for row in rows:
        runtimes.setdefault(row.sampling_pct, {})[row.norm] = row.median_runtime_seconds
    ratios = []
    for pct in sorted(runtimes):
        cell = runtimes[pct]
        if "l1" in cell and "l21" in cell:
            num, den = cell["l21"], cell["l1"]
            if math.isnan(num) or math.isnan(den) or den == 0:
                ratios.append((pct, float("nan")))
            else:
                ratios.append((pct, num / den))
    return ratios


def write_runtime_ratio_csv(rows: list[SummaryRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RATIO_HEADER)
        for pct, ratio in runtime_ratios(rows):
            writer.writerow((_fmt_real(pct), _fmt_real(ratio)))


def write_channel_csv(channel: ChannelGrid, path: str | Path) -> None:
    """Dump the nonzero channel entries as row,col,re,im (row-major order)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CHANNEL_HEADER)
        rows, cols = np.nonzero(channel.values)
        for i, j in zip(rows, cols):
            value = channel.values[i, j]
            writer.writerow((str(i), str(j), _fmt_real(value.real), _fmt_real(value.imag)))


def read_channel_csv(path: str | Path, grid: DelayDopplerGrid) -> ChannelGrid:
    """Rebuild a channel instance from its sparse CSV dump."""
    values = np.zeros(grid.shape, dtype=np.complex128)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CHANNEL_HEADER:
            raise ValueError(f"unexpected channel header: {header}")
        for row in reader:
            i, j = int(row[0]), int(row[1])
            if not (0 <= i < grid.doppler_bins and 0 <= j < grid.delay_taps):
                raise ValueError(f"entry ({i}, {j}) is outside the {grid.shape} grid")
            values[i, j] = float(row[2]) + 1j * float(row[3])
    return ChannelGrid(grid=grid, values=values)
