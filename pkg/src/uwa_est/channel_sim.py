"""Synthetic cluster-sparse channel generation and noise injection.

Multipath arrivals in deep water concentrate in a few bursts, so the
generator places a small number of contiguous delay-tap clusters, each with
a geometric amplitude decay and an optional spread over adjacent Doppler
rows. A scatter mode with isolated taps is also provided as the contrast
regime where plain entry sparsity is the better model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignalError, PlacementError
from .operators import ChannelGrid, DelayDopplerGrid, SamplingMask
from .rng import CHANNEL_STREAM, NOISE_STREAM, component_rng

_MAX_PLACEMENT_ATTEMPTS = 1000


@dataclass(frozen=True)
class ClusterSpec:
    """How many taps the channel carries and how they are grouped.

    ``scatter=True`` ignores contiguity, spread, and decay, and instead
    places n_clusters * taps_per_cluster isolated taps uniformly at random.
    """

    n_clusters: int = 3
    taps_per_cluster: int = 5
    doppler_spread_bins: int = 1
    amplitude_decay: float = 0.8
    rng_seed: int = 0
    scatter: bool = False

    def __post_init__(self):
        if self.n_clusters < 1 or self.taps_per_cluster < 1:
            raise ValueError("cluster counts must be positive")
        if self.doppler_spread_bins < 0:
            raise ValueError("doppler_spread_bins must be nonnegative")
        if not 0 < self.amplitude_decay <= 1:
            raise ValueError("amplitude_decay must lie in (0, 1]")


@dataclass(frozen=True)
class NoiseSpec:
    snr_db: float
    rng_seed: int = 0


def generate_channel(grid: DelayDopplerGrid, spec: ClusterSpec) -> ChannelGrid:
    """Draw a unit-Frobenius-norm sparse channel on the grid.

    Cluster mode places spec.n_clusters disjoint rectangles of
    taps_per_cluster contiguous delay taps by (1 + doppler_spread_bins)
    adjacent Doppler rows, with complex circular-Gaussian amplitudes damped
    by amplitude_decay per delay step inside the cluster. Placement is
    rejection-sampled; a PlacementError is raised after 1000 failed draws.
    Deterministic given spec.rng_seed.
    """
    L, K = grid.shape
    if spec.n_clusters * spec.taps_per_cluster > grid.size:
        raise ValueError("cluster spec does not fit on the grid")
    rng = component_rng(spec.rng_seed, CHANNEL_STREAM)
    values = np.zeros(grid.shape, dtype=np.complex128)

    if spec.scatter:
        n_taps = spec.n_clusters * spec.taps_per_cluster
        idx = rng.choice(grid.size, size=n_taps, replace=False)
        amps = (rng.standard_normal(n_taps) + 1j * rng.standard_normal(n_taps)) / np.sqrt(2)
        values.ravel()[idx] = amps
    else:
        rows_per_cluster = 1 + spec.doppler_spread_bins
        if spec.taps_per_cluster > K or rows_per_cluster > L:
            raise ValueError("cluster spec does not fit on the grid")
        occupied = np.zeros(grid.shape, dtype=bool)
        starts = []
        attempts = 0
        for _ in range(spec.n_clusters):
            while True:
                if attempts >= _MAX_PLACEMENT_ATTEMPTS:
                    raise PlacementError(
                        f"no disjoint cluster layout found in {_MAX_PLACEMENT_ATTEMPTS} attempts"
                    )
                attempts += 1
                d0 = int(rng.integers(0, L - rows_per_cluster + 1))
                k0 = int(rng.integers(0, K - spec.taps_per_cluster + 1))
                block = occupied[d0:d0 + rows_per_cluster, k0:k0 + spec.taps_per_cluster]
                if not block.any():
                    occupied[d0:d0 + rows_per_cluster, k0:k0 + spec.taps_per_cluster] = True
                    starts.append((d0, k0))
                    break
        decay = spec.amplitude_decay ** np.arange(spec.taps_per_cluster)
        for d0, k0 in starts:
            shape = (rows_per_cluster, spec.taps_per_cluster)
            amps = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
            values[d0:d0 + rows_per_cluster, k0:k0 + spec.taps_per_cluster] = amps * decay

    values /= np.linalg.norm(values)
    return ChannelGrid(grid=grid, values=values)


def add_awgn(
    clean: np.ndarray,
    spec: NoiseSpec,
    mask: SamplingMask | None = None,
) -> tuple[np.ndarray, float]:
    """Add complex circular Gaussian noise hitting the requested SNR.

    The noise standard deviation is set from the mean squared modulus of the
    retained entries (all entries, or only the mask-kept ones), so that
    10*log10(signal_power / noise_power) = spec.snr_db per entry. With a
    mask, dropped entries stay exactly as given (zero for a masked
    measurement). Returns the noisy matrix and the realized per-entry noise
    standard deviation, which feeds the fidelity-radius rule.
    """
    clean = np.asarray(clean, dtype=np.complex128)
    if not np.all(np.isfinite(clean)):
        raise ValueError("clean input must be finite")
    kept = None if mask is None else mask.kept
    if kept is not None and kept.shape != clean.shape:
        raise ValueError("mask shape does not match input")
    retained = clean if kept is None else clean[kept]
    signal_power = float(np.mean(np.abs(retained) ** 2))
    if signal_power == 0:
        raise DegenerateSignalError("clean signal is zero on all retained entries")
    noise_std = float(np.sqrt(signal_power * 10.0 ** (-spec.snr_db / 10.0)))

    rng = component_rng(spec.rng_seed, NOISE_STREAM)
    if kept is None:
        noise = (rng.standard_normal(clean.shape) + 1j * rng.standard_normal(clean.shape)) / np.sqrt(2)
        return clean + noise_std * noise, noise_std
    n = int(np.count_nonzero(kept))
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    noisy = clean.copy()
    noisy[kept] += noise_std * noise
    return noisy, noise_std
