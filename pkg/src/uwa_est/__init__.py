"""Sparse underwater-acoustic channel estimation in the delay-Doppler Fourier domain.

The package simulates cluster-sparse channels, measures them through a
(optionally subsampled) unitary 2D Fourier transform, recovers them with
either an l1-ball-constrained least-squares solver or an l21 mixed-norm
solver under a fidelity bound, and benchmarks the two across sampling
ratios, SNRs, and seeds.
"""

from .bench import (
    BenchConfig,
    CSV_HEADER,
    ExperimentRecord,
    NORM_CHOICES,
    SigmaPolicy,
    SolverTuning,
    SummaryRow,
    SweepAxes,
    read_channel_csv,
    read_csv,
    read_summary,
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
from .channel_sim import ClusterSpec, NoiseSpec, add_awgn, generate_channel
from .errors import DegenerateSignalError, DegenerateTruthError, PlacementError
from .norms import (
    GroupLayout,
    norm_l1,
    norm_l2,
    norm_l21,
    project_l1_ball,
    project_l2_ball,
    prox_l1,
    prox_l21,
)
from .operators import (
    ChannelGrid,
    DelayDopplerGrid,
    Measurement,
    SamplingMask,
    apply_mask,
    dft2_adjoint,
    dft2_forward,
    forward_model,
    make_mask,
    mask_cardinality,
    operator_norm_sq,
)
from .rng import CHANNEL_STREAM, MASK_STREAM, NOISE_STREAM, component_rng
from .solvers import (
    SolverConfig,
    SolverReport,
    relative_mse,
    sigma_from_noise,
    solve_l1_constrained,
    solve_l21_fidelity,
)

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "CSV_HEADER",
    "CHANNEL_STREAM",
    "ChannelGrid",
    "ClusterSpec",
    "DegenerateSignalError",
    "DegenerateTruthError",
    "DelayDopplerGrid",
    "ExperimentRecord",
    "GroupLayout",
    "MASK_STREAM",
    "Measurement",
    "NOISE_STREAM",
    "NORM_CHOICES",
    "NoiseSpec",
    "PlacementError",
    "SamplingMask",
    "SigmaPolicy",
    "SolverConfig",
    "SolverReport",
    "SolverTuning",
    "SummaryRow",
    "SweepAxes",
    "add_awgn",
    "apply_mask",
    "component_rng",
    "dft2_adjoint",
    "dft2_forward",
    "forward_model",
    "generate_channel",
    "make_mask",
    "mask_cardinality",
    "norm_l1",
    "norm_l2",
    "norm_l21",
    "operator_norm_sq",
    "project_l1_ball",
    "project_l2_ball",
    "prox_l1",
    "prox_l21",
    "read_channel_csv",
    "read_csv",
    "read_summary",
    "relative_mse",
    "run_single",
    "run_sweep",
    "runtime_ratios",
    "sigma_from_noise",
    "solve_l1_constrained",
    "solve_l21_fidelity",
    "summarize",
    "write_channel_csv",
    "write_csv",
    "write_dat_files",
    "write_runtime_ratio_csv",
    "write_summary",
]
