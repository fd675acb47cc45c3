"""Negative-type quadratic form, finite-sample violation checks, and the
executable counterexample fixtures.

Fixture coordinates are scaled so that every square has unit side, making
within-group transport costs come out as exact powers 2^(1/p), 3^(1/p) and
4^(1/p); each fixture keeps all points far enough above the diagonal that the
optimal matchings never route through it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from topocorr.errors import NumericalFailure
from topocorr.metrics import DistanceMatrix
from topocorr.persistence import PersistenceDiagram


@dataclass(frozen=True)
class WeightedConfiguration:
    """A distance matrix plus zero-sum point weights."""

    distances: DistanceMatrix
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.distances.n,):
            raise ValueError("one weight per sample required")


def quadratic_form(cfg: WeightedConfiguration) -> float:
    """Sum over i,j of w_i w_j d(x_i, x_j); positive certifies a violation."""
    w = cfg.weights
    if abs(w.sum()) > 1e-12:
        raise ValueError("weights must sum to zero")
    return float(w @ cfg.distances.entries @ w)


@dataclass(frozen=True)
class NegTypeVerdict:
    negative_type: bool
    witness: np.ndarray | None
    worst_value: float  # largest eigenvalue of the centered matrix


def negtype_check(d: DistanceMatrix, tol: float = 1e-9) -> NegTypeVerdict:
    """Finite-sample negative-type check via the centered spectrum.

    The matrix is of negative type iff J D J is negative semidefinite on
    centered vectors (J the centering projector).  An eigenvalue above
    ``tol`` yields a violation; its eigenvector is the witness weights.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    n = d.n
    j = np.eye(n) - np.ones((n, n)) / n
    centered = j @ d.entries @ j
    centered = (centered + centered.T) / 2.0
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(centered)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("eigensolver failed to converge") from exc
    worst = float(eigenvalues[-1])
    if worst > tol:
        witness = j @ eigenvectors[:, -1]
        return NegTypeVerdict(False, witness, worst)
    return NegTypeVerdict(True, None, worst)


def _diagram(*points) -> PersistenceDiagram:
    return PersistenceDiagram(tuple((float(b), float(d), 1) for b, d in points))


# Unit squares above the diagonal; corners named as in the derivation notes.
_SQ1 = {"a1": (0, 4), "b1": (1, 4), "c1": (0, 3), "d1": (1, 3)}
_SQ2 = {"a2": (4, 8), "b2": (5, 8), "c2": (4, 7), "d2": (5, 7)}
_E1 = (0.5, 3.5)
_E2 = (4.5, 7.5)
# Second pair of unit squares, well separated from the first and the diagonal.
_USQ1 = {"A1": (-4, 0), "B1": (-3, 0), "C1": (-4, -1), "D1": (-3, -1)}
_USQ2 = {"A2": (-8, -4), "B2": (-7, -4), "C2": (-8, -5), "D2": (-7, -5)}
_UE1 = (-3.5, -0.5)
_UE2 = (-7.5, -4.5)


def fixture_small_p():
    """16 diagrams (x1..x8, y1..y8) and their +-1 weights.

    Each diagram pairs an edge of one unit square with a diagonal of the
    other; the family violates negative type for W_p exactly when
    p < ln(2)/ln(4/3).
    """
    edges1 = [("a1", "b1"), ("a1", "c1"), ("b1", "d1"), ("c1", "d1")]
    diag2 = [("a2", "d2"), ("b2", "c2")]
    diag1 = [("a1", "d1"), ("b1", "c1")]
    edges2 = [("a2", "b2"), ("a2", "c2"), ("b2", "d2"), ("c2", "d2")]
    pts = {**_SQ1, **_SQ2}
    diagrams = []
    # x group: square-1 edge with square-2 diagonal (order: diag-major).
    for d2 in diag2:
        for e1 in edges1:
            diagrams.append(_diagram(*(pts[k] for k in e1 + d2)))
    # y group: square-1 diagonal with square-2 edge.
    for d1 in diag1:
        for e2 in edges2:
            diagrams.append(_diagram(*(pts[k] for k in d1 + e2)))
    weights = np.array([1.0] * 8 + [-1.0] * 8)
    return diagrams, weights


def fixture_large_p():
    """32 diagrams (16 in X, 16 in Y) and +-1 weights.

    X pairs one corner from each upper-case square with the lower-case
    centers; Y pairs one corner from each lower-case square with the
    upper-case centers.  Violates negative type for p >= 2.4 and bottleneck.
    """
    diagrams = []
    for k1, k2 in itertools.product(sorted(_USQ1), sorted(_USQ2)):
        diagrams.append(_diagram(_USQ1[k1], _USQ2[k2], _E1, _E2))
    for k1, k2 in itertools.product(sorted(_SQ1), sorted(_SQ2)):
        diagrams.append(_diagram(_SQ1[k1], _SQ2[k2], _UE1, _UE2))
    weights = np.array([1.0] * 16 + [-1.0] * 16)
    return diagrams, weights


def fixture_landscape_l1():
    """Four barcodes whose L^1-landscape quadratic form is exactly zero."""
    x1 = _diagram((0, 1), (3, 4))
    x2 = _diagram((1, 2), (2, 3))
    y1 = _diagram((0, 1), (1, 2))
    y2 = _diagram((2, 3), (3, 4))
    return [x1, x2, y1, y2], np.array([1.0, 1.0, -1.0, -1.0])


def fixture_landscape_linf():
    """Six barcodes with within-group L^inf distance 1 and cross distance 0.5."""
    x1 = _diagram((0, 2), (6.5, 7.5), (8.5, 9.5), (10.5, 11.5))
    x2 = _diagram((2, 4), (6.5, 7.5), (8.5, 9.5), (10.5, 11.5))
    x3 = _diagram((4, 6), (6.5, 7.5), (8.5, 9.5), (10.5, 11.5))
    y1 = _diagram((0.5, 1.5), (2.5, 3.5), (4.5, 5.5), (6, 8))
    y2 = _diagram((0.5, 1.5), (2.5, 3.5), (4.5, 5.5), (8, 10))
    y3 = _diagram((0.5, 1.5), (2.5, 3.5), (4.5, 5.5), (10, 12))
    return [x1, x2, x3, y1, y2, y3], np.array([1.0, 1.0, 1.0, -1.0, -1.0, -1.0])
