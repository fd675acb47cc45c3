"""Exact distances between topological summaries and pairwise distance matrices.

Diagram transport distances use the diagonal-augmented assignment problem:
for diagrams of sizes m and n, an (m+n) x (m+n) cost matrix lets every point
match its diagonal projection while diagonal-to-diagonal moves are free.  The
assignment is solved exactly (Jonker-Volgenant); the bottleneck distance uses
binary search over candidate costs with a bipartite feasibility matching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from topocorr.errors import ConfigurationError, NumericalFailure
from topocorr.persistence import PersistenceDiagram
from topocorr.summaries import PersistenceLandscape, StepCurve, evaluate_piecewise_linear


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric non-negative matrix of pairwise distances with a metric label."""

    n: int
    entries: np.ndarray
    label: str

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", e)
        if e.shape != (self.n, self.n):
            raise ValueError(f"entries must be {self.n}x{self.n}")
        if not np.all(np.isfinite(e)):
            raise ValueError("entries must be finite")
        if np.any(e < 0):
            raise ValueError("entries must be non-negative")
        if np.any(np.diag(e) != 0):
            raise ValueError("diagonal must be zero")
        if not np.array_equal(e, e.T):
            raise ValueError("entries must be symmetric")


def diagonal_distance(point, p) -> float:
    """L^p distance of a diagram point to the diagonal."""
    birth, death = point
    if not birth < death:
        raise ValueError("birth must precede death")
    if p != math.inf and p < 1:
        raise ValueError("p must be >= 1")
    if p == math.inf:
        return (death - birth) / 2.0
    return 2.0 ** (1.0 / p - 1.0) * (death - birth)


def _augmented_cost_matrix(xs, ys, p):
    """Powered L^p costs of the diagonal-augmented problem ((m+n) square)."""
    m, n = len(xs), len(ys)
    cost = np.zeros((m + n, m + n))
    if m and n:
        xa = np.array(xs)
        ya = np.array(ys)
        db = np.abs(xa[:, None, 0] - ya[None, :, 0])
        dd = np.abs(xa[:, None, 1] - ya[None, :, 1])
        cost[:m, :n] = db ** p + dd ** p
    if m:
        diag_x = np.array([diagonal_distance(x, p) ** p for x in xs])
        cost[:m, n:] = diag_x[:, None]
    if n:
        diag_y = np.array([diagonal_distance(y, p) ** p for y in ys])
        cost[m:, :n] = diag_y[None, :]
    return cost


def wasserstein(d1: PersistenceDiagram, d2: PersistenceDiagram, p) -> float:
    """Exact p-Wasserstein distance with L^p ground metric (q = p)."""
    if p == math.inf or p < 1:
        raise ValueError("p must be finite and >= 1")
    xs, ys = d1.pairs(), d2.pairs()
    if not xs and not ys:
        return 0.0
    cost = _augmented_cost_matrix(xs, ys, p)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum() ** (1.0 / p))


def _linf_cost_matrix(xs, ys):
    m, n = len(xs), len(ys)
    cost = np.zeros((m + n, m + n))
    if m and n:
        xa = np.array(xs)
        ya = np.array(ys)
        cost[:m, :n] = np.maximum(np.abs(xa[:, None, 0] - ya[None, :, 0]),
                                  np.abs(xa[:, None, 1] - ya[None, :, 1]))
    if m:
        cost[:m, n:] = np.array([diagonal_distance(x, math.inf) for x in xs])[:, None]
    if n:
        cost[m:, :n] = np.array([diagonal_distance(y, math.inf) for y in ys])[None, :]
    return cost


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Exact bottleneck distance via binary search over candidate costs."""
    xs, ys = d1.pairs(), d2.pairs()
    if not xs and not ys:
        return 0.0
    cost = _linf_cost_matrix(xs, ys)
    candidates = np.unique(cost)

    def feasible(threshold):
        graph = csr_matrix(cost <= threshold)
        matching = maximum_bipartite_matching(graph, perm_type="column")
        return int((matching >= 0).sum()) == cost.shape[0]

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def _segment_lp_integral(v0, v1, h, p):
    """Integral of |linear segment|^p from v0 to v1 over length h; one sign."""
    a0, a1 = abs(v0), abs(v1)
    if h == 0.0:
        return 0.0
    if a0 == a1:
        return a0 ** p * h
    return h * abs(a1 ** (p + 1) - a0 ** (p + 1)) / ((p + 1) * abs(a1 - a0))


def _level_difference_segments(l1, l2):
    """Yield (h, v0, v1) segments of the difference of two breakpoint lists,
    refined so every segment has a single sign."""
    ts = sorted({t for t, _ in l1} | {t for t, _ in l2})
    for t0, t1 in zip(ts, ts[1:]):
        v0 = evaluate_piecewise_linear(l1, t0) - evaluate_piecewise_linear(l2, t0)
        v1 = evaluate_piecewise_linear(l1, t1) - evaluate_piecewise_linear(l2, t1)
        if v0 * v1 < 0:
            tc = t0 + (t1 - t0) * v0 / (v0 - v1)
            yield (tc - t0, v0, 0.0)
            yield (t1 - tc, 0.0, v1)
        else:
            yield (t1 - t0, v0, v1)


def landscape_distance(l1: PersistenceLandscape, l2: PersistenceLandscape, p) -> float:
    """Exact L^p distance between landscapes (levelwise, then p-summed)."""
    if p != math.inf and p < 1:
        raise ValueError("p must be >= 1 or infinity")
    depth = max(l1.level_count(), l2.level_count())
    if p == math.inf:
        worst = 0.0
        for k in range(depth):
            a = l1.levels[k] if k < l1.level_count() else ()
            b = l2.levels[k] if k < l2.level_count() else ()
            ts = sorted({t for t, _ in a} | {t for t, _ in b})
            for t in ts:
                worst = max(worst, abs(evaluate_piecewise_linear(a, t)
                                       - evaluate_piecewise_linear(b, t)))
        return worst
    total = 0.0
    for k in range(depth):
        a = l1.levels[k] if k < l1.level_count() else ()
        b = l2.levels[k] if k < l2.level_count() else ()
        for h, v0, v1 in _level_difference_segments(a, b):
            total += _segment_lp_integral(v0, v1, h, p)
    return total ** (1.0 / p)


def curve_distance(c1: StepCurve, c2: StepCurve, p) -> float:
    """Exact L^p distance between step curves (integral over the breakpoint union)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    ts = sorted(set(c1.breakpoints) | set(c2.breakpoints))
    total = 0.0
    for t0, t1 in zip(ts, ts[1:]):
        diff = abs(c1.evaluate(t0) - c2.evaluate(t0))
        total += diff ** p * (t1 - t0)
    return total ** (1.0 / p)


def pss_kernel(f: PersistenceDiagram, g: PersistenceDiagram, sigma: float) -> float:
    """Persistence scale space kernel (closed form of the heat solution).

    Both exponentials decay; the mirrored term subtracts the reflected mass.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    fp, gp = f.pairs(), g.pairs()
    if not fp or not gp:
        return 0.0
    fa = np.array(fp)
    ga = np.array(gp)
    direct = ((fa[:, None, 0] - ga[None, :, 0]) ** 2
              + (fa[:, None, 1] - ga[None, :, 1]) ** 2)
    mirrored = ((fa[:, None, 0] - ga[None, :, 1]) ** 2
                + (fa[:, None, 1] - ga[None, :, 0]) ** 2)
    s = np.exp(-direct / (8.0 * sigma)) - np.exp(-mirrored / (8.0 * sigma))
    return float(s.sum() / (8.0 * math.pi * sigma))


def pss_distance(f: PersistenceDiagram, g: PersistenceDiagram, sigma: float) -> float:
    """Kernel-induced L^2 distance for the scale space kernel."""
    radicand = pss_kernel(f, f, sigma) + pss_kernel(g, g, sigma) - 2.0 * pss_kernel(f, g, sigma)
    if radicand < -1e-12:
        raise NumericalFailure(f"kernel distance radicand {radicand} below tolerance")
    return math.sqrt(max(radicand, 0.0))


def sliced_wasserstein(d1: PersistenceDiagram, d2: PersistenceDiagram, lines: int = 10) -> float:
    """Sliced Wasserstein distance, averaged over equidistributed lines.

    The mean over angles i*pi/lines equals the circle average because
    antipodal directions give identical 1-D transport costs.
    """
    if lines < 1:
        raise ValueError("lines must be >= 1")
    p1 = np.array(d1.pairs(), dtype=float).reshape(-1, 2)
    p2 = np.array(d2.pairs(), dtype=float).reshape(-1, 2)
    diag1 = np.repeat(p1.mean(axis=1, keepdims=True), 2, axis=1) if len(p1) else p1
    diag2 = np.repeat(p2.mean(axis=1, keepdims=True), 2, axis=1) if len(p2) else p2
    side1 = np.concatenate([p1, diag2]) if len(p1) or len(diag2) else p1
    side2 = np.concatenate([p2, diag1]) if len(p2) or len(diag1) else p2
    if side1.shape[0] == 0:
        return 0.0
    total = 0.0
    for i in range(lines):
        theta = i * math.pi / lines
        direction = np.array([math.cos(theta), math.sin(theta)])
        a = np.sort(side1 @ direction)
        b = np.sort(side2 @ direction)
        total += float(np.abs(a - b).sum())
    return total / lines


def sw_kernel_distance(d1: PersistenceDiagram, d2: PersistenceDiagram,
                       sigma: float, lines: int = 10) -> float:
    """Distance induced by the Gaussian sliced Wasserstein kernel."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    sw = sliced_wasserstein(d1, d2, lines)
    radicand = 2.0 - 2.0 * math.exp(-sw / (2.0 * sigma * sigma))
    if radicand < -1e-12:
        raise NumericalFailure(f"kernel distance radicand {radicand} below tolerance")
    return math.sqrt(max(radicand, 0.0))


@dataclass(frozen=True)
class MetricSpec:
    """Parsed metric spec string; knows which summary kind it consumes."""

    name: str
    params: dict
    spec: str

    KINDS = {
        "wasserstein": "diagram",
        "bottleneck": "diagram",
        "pss": "diagram",
        "sw": "diagram",
        "swk": "diagram",
        "landscape": "landscape",
        "betti": "betti",
        "euler": "euler",
    }

    @property
    def summary_kind(self):
        if self.name.startswith("count"):
            return "count"
        return self.KINDS[self.name]

    @property
    def label(self):
        return self.spec

    def distance(self, a, b):
        p = self.params
        if self.name == "wasserstein":
            return wasserstein(a, b, p["p"])
        if self.name == "bottleneck":
            return bottleneck(a, b)
        if self.name == "pss":
            return pss_distance(a, b, p["sigma"])
        if self.name == "sw":
            return sliced_wasserstein(a, b, p.get("lines", 10))
        if self.name == "swk":
            return sw_kernel_distance(a, b, p["sigma"], p.get("lines", 10))
        if self.name == "landscape":
            return landscape_distance(a, b, p["p"])
        if self.name in ("betti", "euler") or self.name.startswith("count"):
            return curve_distance(a, b, p["p"])
        raise ConfigurationError(f"unknown metric {self.name!r}")


def parse_metric_spec(spec: str) -> MetricSpec:
    """Parse strings like ``wasserstein:p=1`` or ``swk:sigma=1,lines=10``."""
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    name = name.strip()
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ConfigurationError(f"bad metric parameter {item!r} in {spec!r}")
            key = key.strip()
            value = value.strip()
            if key == "lines":
                params[key] = int(value)
            elif value in ("inf", "infinity"):
                params[key] = math.inf
            else:
                params[key] = float(value)
    known = name in MetricSpec.KINDS or (name.startswith("count") and name[5:].isdigit())
    if not known:
        raise ConfigurationError(f"unknown metric {name!r}")
    if name == "wasserstein" and "p" not in params:
        raise ConfigurationError("wasserstein needs p=")
    if name in ("pss", "swk") and "sigma" not in params:
        raise ConfigurationError(f"{name} needs sigma=")
    if name in ("landscape", "betti", "euler") and "p" not in params:
        raise ConfigurationError(f"{name} needs p=")
    if name.startswith("count") and "p" not in params:
        raise ConfigurationError("count curves need p=")
    ms = MetricSpec(name, params, spec)
    if ms.params.get("p") is not None and ms.params["p"] != math.inf and ms.params["p"] < 1:
        raise ConfigurationError("p must be >= 1")
    return ms


def count_dimension(spec: MetricSpec) -> int:
    """Cell dimension for a ``count<d>`` metric spec."""
    return int(spec.name[5:])


def pairwise_matrix(samples, metric: MetricSpec) -> DistanceMatrix:
    """Symmetric matrix of the chosen metric over a homogeneous sample list."""
    n = len(samples)
    if n < 2:
        raise ValueError("need at least 2 samples")
    entries = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            try:
                d = metric.distance(samples[i], samples[j])
            except (AttributeError, TypeError) as exc:
                raise ValueError(f"metric {metric.label!r} does not fit samples") from exc
            entries[i, j] = entries[j, i] = d
    return DistanceMatrix(n, entries, metric.label)
