"""Sample distance covariance/correlation and the permutation independence test.

The estimator is the plug-in V-statistic: double-center both distance
matrices, then average the entrywise product over all n^2 index pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topocorr.metrics import DistanceMatrix
from topocorr.models import derive_seed


@dataclass(frozen=True)
class CenteredMatrix:
    """Doubly centered distance matrix; all rows and columns sum to zero."""

    n: int
    entries: np.ndarray


@dataclass(frozen=True)
class DcorReport:
    """Signed dcov/dvar/dcor together with their square-rooted conventions.

    ``negative_flag`` is raised when dcov < 0, which can only happen for
    metrics that are not of negative type.
    """

    dcov: float
    dvar_x: float
    dvar_y: float
    dcor: float
    dCov: float
    dVar_x: float
    dVar_y: float
    dCor: float
    negative_flag: bool

    def to_text(self):
        lines = [f"{key}={getattr(self, key)!r}" for key in
                 ("dcov", "dvar_x", "dvar_y", "dcor",
                  "dCov", "dVar_x", "dVar_y", "dCor", "negative_flag")]
        return "\n".join(lines) + "\n"


def double_center(d: DistanceMatrix) -> CenteredMatrix:
    """A_{k,l} = a_{k,l} - rowmean_k - colmean_l + grandmean."""
    a = d.entries
    row = a.mean(axis=1, keepdims=True)
    col = a.mean(axis=0, keepdims=True)
    grand = a.mean()
    return CenteredMatrix(d.n, a - row - col + grand)


def sample_dcov(a: CenteredMatrix, b: CenteredMatrix) -> float:
    """V-statistic distance covariance; may be negative off negative-type spaces."""
    if a.n != b.n:
        raise ValueError("centered matrices must have equal size")
    return float((a.entries * b.entries).sum() / (a.n * a.n))


def sample_dcor(dx: DistanceMatrix, dy: DistanceMatrix) -> DcorReport:
    """Full distance correlation report between two distance matrices."""
    if dx.n != dy.n:
        raise ValueError("distance matrices must have equal size")
    if dx.n < 2:
        raise ValueError("need at least 2 samples")
    a = double_center(dx)
    b = double_center(dy)
    dcov = sample_dcov(a, b)
    dvar_x = sample_dcov(a, a)
    dvar_y = sample_dcov(b, b)
    if dvar_x > 0 and dvar_y > 0:
        dcor = dcov / np.sqrt(dvar_x * dvar_y)
        negative = dcov < 0
    else:
        # Degenerate input (single-point distribution): no information.
        dcor = 0.0
        negative = False
    return DcorReport(
        dcov=dcov,
        dvar_x=dvar_x,
        dvar_y=dvar_y,
        dcor=float(dcor),
        dCov=float(np.sqrt(max(dcov, 0.0))),
        dVar_x=float(np.sqrt(dvar_x)),
        dVar_y=float(np.sqrt(dvar_y)),
        dCor=float(np.sqrt(max(dcor, 0.0))),
        negative_flag=bool(negative),
    )


def dcor_matrix(mats) -> tuple[np.ndarray, list[list[bool]]]:
    """Pairwise dCor between distance matrices; also reports negative flags."""
    mats = list(mats)
    if len(mats) < 2:
        raise ValueError("need at least 2 matrices")
    n = mats[0].n
    if any(m.n != n for m in mats):
        raise ValueError("all matrices must share the sample count")
    k = len(mats)
    out = np.zeros((k, k))
    flags = [[False] * k for _ in range(k)]
    centered = [double_center(m) for m in mats]
    dvars = [sample_dcov(c, c) for c in centered]
    for i in range(k):
        out[i, i] = 1.0 if dvars[i] > 0 else 0.0
        for j in range(i + 1, k):
            dcov = sample_dcov(centered[i], centered[j])
            if dvars[i] > 0 and dvars[j] > 0:
                dcor = dcov / np.sqrt(dvars[i] * dvars[j])
            else:
                dcor = 0.0
            out[i, j] = out[j, i] = np.sqrt(max(dcor, 0.0))
            flags[i][j] = flags[j][i] = bool(dcov < 0)
    return out, flags


def permutation_test(dx: DistanceMatrix, dy: DistanceMatrix,
                     permutations: int, seed: int) -> float:
    """Permutation p-value for independence based on dcov.

    Labels of ``dy`` are permuted (simultaneous row/column permutation) and
    dcov recomputed; p = (1 + #{permuted >= observed}) / (permutations + 1).
    """
    if permutations < 1:
        raise ValueError("need at least one permutation")
    a = double_center(dx)
    b = double_center(dy)
    observed = sample_dcov(a, b)
    n = dx.n
    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, 0)))
    exceed = 0
    # Centering commutes with relabeling, so permute the centered matrix.
    for _ in range(permutations):
        perm = rng.permutation(n)
        permuted = b.entries[np.ix_(perm, perm)]
        stat = float((a.entries * permuted).sum() / (n * n))
        if stat >= observed:
            exceed += 1
    return (1 + exceed) / (permutations + 1)
