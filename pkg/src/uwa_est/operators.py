"""Linear measurement model on the delay-Doppler grid.

The channel matrix lives on an L x K grid (L Doppler bins, K delay taps).
Measurements are taken in the 2D Fourier domain through a unitary DFT,
optionally subsampled by a binary random mask whose cardinality is set by a
sampling percentage. The DFT is unitary (1/sqrt(LK) scaling) so the forward
operator is an isometry, its adjoint is its inverse, and the composed
masked operator has norm exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import MASK_STREAM, component_rng


@dataclass(frozen=True)
class DelayDopplerGrid:
    """Dimensions and physical resolution of the delay-Doppler plane.

    Resolutions are carried as metadata only; none of the estimation math
    depends on them. Defaults follow the benchmark operating point
    (25 Hz Doppler bins, 0.05 s delay taps).
    """

    doppler_bins: int
    delay_taps: int
    doppler_resolution_hz: float = 25.0
    delay_resolution_s: float = 0.05

    def __post_init__(self):
        if self.doppler_bins < 1 or self.delay_taps < 1:
            raise ValueError("grid dimensions must be at least 1x1")
        if self.doppler_resolution_hz <= 0 or self.delay_resolution_s <= 0:
            raise ValueError("grid resolutions must be strictly positive")

    @property
    def shape(self) -> tuple[int, int]:
        """(L, K) array shape of matrices on this grid."""
        return (self.doppler_bins, self.delay_taps)

    @property
    def size(self) -> int:
        return self.doppler_bins * self.delay_taps


def _frozen_array(obj, name: str, value: np.ndarray) -> None:
    # dataclass is frozen, so attach the read-only copy via object.__setattr__
    value = value.copy()
    value.flags.writeable = False
    object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class ChannelGrid:
    """Complex L x K channel matrix (ground truth or estimate) on a grid."""

    grid: DelayDopplerGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValueError(
                f"channel shape {v.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("channel values must be finite")
        _frozen_array(self, "values", v)


@dataclass(frozen=True)
class SamplingMask:
    """Binary selection of observed 2D-Fourier positions.

    ``cardinality`` is the number of kept positions M; for a mask built from
    a sampling percentage S it equals round(K*L*S/100) clamped to [1, K*L].
    """

    grid: DelayDopplerGrid
    kept: np.ndarray
    cardinality: int

    def __post_init__(self):
        kept = np.asarray(self.kept, dtype=bool)
        if kept.shape != self.grid.shape:
            raise ValueError(
                f"mask shape {kept.shape} does not match grid {self.grid.shape}"
            )
        m = int(np.count_nonzero(kept))
        if m != self.cardinality:
            raise ValueError(
                f"cardinality {self.cardinality} does not match kept count {m}"
            )
        if not 1 <= self.cardinality <= self.grid.size:
            raise ValueError("cardinality must lie in [1, K*L]")
        _frozen_array(self, "kept", kept)


@dataclass(frozen=True)
class Measurement:
    """Fourier-domain measurement, either full or masked.

    When a mask is present the values at dropped positions are exactly zero;
    the matrix is stored full-size for simplicity at this scale.
    """

    grid: DelayDopplerGrid
    values: np.ndarray
    mask: SamplingMask | None = None
    snr_db: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValueError(
                f"measurement shape {v.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("measurement values must be finite")
        if self.mask is not None:
            if self.mask.grid.shape != self.grid.shape:
                raise ValueError("mask grid does not match measurement grid")
            if np.any(v[~self.mask.kept] != 0):
                raise ValueError("masked measurement must be exactly zero off-mask")
        _frozen_array(self, "values", v)


def _as_values(h: ChannelGrid | np.ndarray) -> np.ndarray:
    if isinstance(h, ChannelGrid):
        return h.values
    v = np.asarray(h, dtype=np.complex128)
    if not np.all(np.isfinite(v)):
        raise ValueError("input must be finite")
    return v


def _dft2(values: np.ndarray) -> np.ndarray:
    # unvalidated kernel shared with the solvers' iteration loops
    return np.fft.fft2(values, norm="ortho")


def _idft2(values: np.ndarray) -> np.ndarray:
    return np.fft.ifft2(values, norm="ortho")


def dft2_forward(h: ChannelGrid | np.ndarray) -> np.ndarray:
    """Unitary 2D DFT of the channel matrix.

    With the 1/sqrt(LK) normalization the transform preserves the Frobenius
    norm, so spectra and channels live on the same energy scale.
    """
    return _dft2(_as_values(h))


def dft2_adjoint(u: np.ndarray) -> np.ndarray:
    """Adjoint (equivalently inverse) of the unitary 2D DFT."""
    return _idft2(_as_values(u))


def mask_cardinality(grid: DelayDopplerGrid, sampling_pct: float) -> int:
    """Kept-position count for a sampling percentage: round(K*L*S/100).

    Rounds half up and clamps to [1, K*L]; an empty mask would make the
    recovery problems degenerate.
    """
    if not 0 < sampling_pct <= 100:
        raise ValueError("sampling_pct must lie in (0, 100]")
    m = int(np.floor(grid.size * sampling_pct / 100.0 + 0.5))
    return min(max(m, 1), grid.size)


def make_mask(grid: DelayDopplerGrid, sampling_pct: float, rng_seed: int) -> SamplingMask:
    """Draw a uniformly random without-replacement mask of the prescribed cardinality.

    Deterministic given the seed (see :mod:`uwa_est.rng` for the pinned
    generator).
    """
    m = mask_cardinality(grid, sampling_pct)
    rng = component_rng(rng_seed, MASK_STREAM)
    idx = rng.choice(grid.size, size=m, replace=False)
    kept = np.zeros(grid.size, dtype=bool)
    kept[idx] = True
    return SamplingMask(grid=grid, kept=kept.reshape(grid.shape), cardinality=m)


def apply_mask(mask: SamplingMask, u: np.ndarray) -> np.ndarray:
    """Zero out the entries of ``u`` that the mask drops."""
    u = np.asarray(u)
    if u.shape != mask.kept.shape:
        raise ValueError(f"shape mismatch: mask {mask.kept.shape}, input {u.shape}")
    return np.where(mask.kept, u, 0)


def forward_model(h: ChannelGrid | np.ndarray, mask: SamplingMask | None = None) -> np.ndarray:
    """Measurement operator: F h, or the masked composition R o (F h)."""
    u = dft2_forward(h)
    if mask is None:
        return u
    return apply_mask(mask, u)


def operator_norm_sq(mask: SamplingMask | None, grid: DelayDopplerGrid) -> float:
    """Squared operator norm of the (masked) forward model.

    The unitary DFT composed with a selection mask has norm exactly 1, so
    this returns 1.0. It is kept as an explicit seam: a non-unitary or
    weighted operator stack would plug its own bound in here, and the
    solvers would pick it up as their Lipschitz constant.
    """
    if mask is not None and mask.grid.shape != grid.shape:
        raise ValueError("mask grid does not match grid")
    return 1.0
