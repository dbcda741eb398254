"""Norms and the proximal/projection kernels used by the solvers.

Entries are complex, so every squared term is a squared modulus. The mixed
norm sums Euclidean norms of non-overlapping groups; a matrix is grouped
either by rows or by columns, chosen explicitly because the benchmark
exposes both readings.
"""

from __future__ import annotations

from enum import Enum

import numpy as np


class GroupLayout(str, Enum):
    """How an L x K matrix is partitioned into groups for the mixed norm."""

    ROWS = "rows"
    COLS = "cols"


def _group_axis(layout: GroupLayout) -> int:
    # axis reduced by the inner l2; ROWS means one group per row
    return 1 if GroupLayout(layout) is GroupLayout.ROWS else 0


def norm_l2(x: np.ndarray) -> float:
    """Euclidean (Frobenius) norm: sqrt(sum |x_i|^2)."""
    return float(np.linalg.norm(np.asarray(x).ravel()))


def norm_l1(x: np.ndarray) -> float:
    """Sum of entry moduli."""
    return float(np.sum(np.abs(x)))


def norm_l21(x: np.ndarray, layout: GroupLayout = GroupLayout.ROWS) -> float:
    """Mixed norm: sum over groups of the group Euclidean norms.

    Collapses to the l1 norm when every group is a singleton and to the l2
    norm when there is a single group.
    """
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError("mixed norm is defined on 2-D matrices")
    return float(np.sum(np.sqrt(np.sum(np.abs(x) ** 2, axis=_group_axis(layout)))))


def prox_l1(z: np.ndarray, lam: float) -> np.ndarray:
    """Entrywise complex soft threshold: minimizer of 1/2||x - z||^2 + lam*||x||_1.

    Each entry shrinks toward zero by ``lam`` in modulus, keeping its phase;
    entries with modulus below ``lam`` vanish.
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    z = np.asarray(z)
    mod = np.abs(z)
    scale = np.where(mod > 0, np.maximum(1.0 - lam / np.where(mod > 0, mod, 1.0), 0.0), 0.0)
    return z * scale


def prox_l21(z: np.ndarray, lam: float, layout: GroupLayout = GroupLayout.ROWS) -> np.ndarray:
    """Groupwise shrinkage: minimizer of 1/2||X - Z||_F^2 + lam*||X||_21.

    Each group shrinks by ``lam`` in Euclidean norm, direction preserved;
    groups with norm below ``lam`` vanish. Zero groups stay zero.
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    z = np.asarray(z)
    if z.ndim != 2:
        raise ValueError("group shrinkage is defined on 2-D matrices")
    axis = _group_axis(layout)
    gnorm = np.sqrt(np.sum(np.abs(z) ** 2, axis=axis, keepdims=True))
    scale = np.where(gnorm > 0, np.maximum(1.0 - lam / np.where(gnorm > 0, gnorm, 1.0), 0.0), 0.0)
    return z * scale


def project_l1_ball(z: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto {x : ||x||_1 <= radius}.

    Feasible inputs come back unchanged. Otherwise the moduli are projected
    with the sorted-cumulative-sum threshold rule and the phases reattached,
    which is the exact projection for complex entries. The result does not
    depend on how ties are ordered by the sort.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    z = np.asarray(z)
    mod = np.abs(z).ravel()
    if mod.sum() <= radius:
        return z.copy()
    srt = np.sort(mod)[::-1]
    cumsum = np.cumsum(srt)
    counts = np.arange(1, mod.size + 1)
    thresholds = (cumsum - radius) / counts
    rho = np.nonzero(srt > thresholds)[0][-1]
    # the exact threshold is nonnegative; rounding can push it fractionally
    # below zero when the input sits numerically on the ball boundary
    theta = max(float(thresholds[rho]), 0.0)
    return prox_l1(z, theta)


def project_l2_ball(z: np.ndarray, radius: float, center: np.ndarray | None = None) -> np.ndarray:
    """Euclidean projection onto the ball of given radius around ``center``.

    ``center=None`` means the origin.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    z = np.asarray(z)
    if center is None:
        center = np.zeros_like(z)
    center = np.asarray(center)
    if center.shape != z.shape:
        raise ValueError(f"shape mismatch: input {z.shape}, center {center.shape}")
    diff = z - center
    dist = np.linalg.norm(diff.ravel())
    if dist <= radius:
        return z.copy()
    return center + (radius / dist) * diff
