"""Landscapes, Betti/Euler curves and simplex-count curves.

Landscapes are stored with exact breakpoints (no sampling grid); step curves
are right-continuous and zero outside their breakpoints.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from topocorr.complexes import FilteredComplex
from topocorr.persistence import PersistenceDiagram


@dataclass(frozen=True)
class PersistenceLandscape:
    """Levels λ_1 >= λ_2 >= ... as sorted (t, value) breakpoint lists.

    Each level is zero outside its first/last breakpoint and piecewise linear
    with slopes in {-1, 0, +1} in between.
    """

    levels: tuple[tuple[tuple[float, float], ...], ...]

    def level_count(self):
        return len(self.levels)

    def evaluate(self, k, t):
        """Value of λ_k (1-based) at t."""
        if k < 1:
            raise ValueError("levels are 1-based")
        if k > len(self.levels):
            return 0.0
        return evaluate_piecewise_linear(self.levels[k - 1], t)

    def max_value(self):
        return max((v for lvl in self.levels for _, v in lvl), default=0.0)


def evaluate_piecewise_linear(breaks, t):
    """Evaluate a (t, value) breakpoint list at t; zero outside the support."""
    if not breaks:
        return 0.0
    ts = [p[0] for p in breaks]
    if t <= ts[0] or t >= ts[-1]:
        # Endpoint values are zero by construction; honor stored value at ends.
        if t == ts[0]:
            return breaks[0][1]
        if t == ts[-1]:
            return breaks[-1][1]
        return 0.0
    i = bisect.bisect_right(ts, t)
    (t0, v0), (t1, v1) = breaks[i - 1], breaks[i]
    if t1 == t0:
        return v1
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0)


def _simplify(level):
    """Drop collinear interior breakpoints."""
    out = []
    for t, v in level:
        while len(out) >= 2:
            (t0, v0), (t1, v1) = out[-2], out[-1]
            if t1 == t0:
                break
            # Collinear iff (t1,v1) lies on the segment (t0,v0)-(t,v).
            if t != t0 and abs((v - v0) * (t1 - t0) - (v1 - v0) * (t - t0)) <= 1e-15 * max(1.0, abs(t - t0)):
                out.pop()
                continue
            break
        if out and out[-1] == (t, v):
            continue
        out.append((t, v))
    return tuple(out)


def landscape_from_diagram(d: PersistenceDiagram, k_max=None) -> PersistenceLandscape:
    """Exact persistence landscape: λ_k(t) is the k-th largest tent value.

    Uses the standard sweep that peels one level at a time, keeping leftover
    bar overlaps for the deeper levels.
    """
    if k_max is not None and k_max < 1:
        raise ValueError("k_max must be >= 1")
    bars = sorted(((b, -death) for b, death, _ in d.points))
    bars = [(b, -nd) for b, nd in bars]
    levels = []
    while bars and (k_max is None or len(levels) < k_max):
        b, death = bars.pop(0)
        level = [(b, 0.0), ((b + death) / 2.0, (death - b) / 2.0)]
        pos = 0
        while True:
            while pos < len(bars) and bars[pos][1] <= death:
                pos += 1
            if pos == len(bars):
                level.append((death, 0.0))
                break
            b2, d2 = bars.pop(pos)
            if b2 > death:
                level.append((death, 0.0))
                level.append((b2, 0.0))
            elif b2 == death:
                level.append((death, 0.0))
            else:
                level.append(((b2 + death) / 2.0, (death - b2) / 2.0))
                # The overlap (b2, death) survives to a deeper level.
                bisect.insort(bars, (b2, death), key=lambda bar: (bar[0], -bar[1]))
                pos += 1
            level.append(((b2 + d2) / 2.0, (d2 - b2) / 2.0))
            b, death = b2, d2
        levels.append(_simplify(level))
    return PersistenceLandscape(tuple(levels))


@dataclass(frozen=True)
class StepCurve:
    """Right-continuous integer step function, zero outside its breakpoints.

    ``values[i]`` holds on [breakpoints[i], breakpoints[i+1]); there is one
    value per gap between consecutive breakpoints.
    """

    breakpoints: tuple[float, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if self.breakpoints and len(self.values) != len(self.breakpoints) - 1:
            raise ValueError("need one value per interval between breakpoints")
        if any(b <= a for b, a in zip(self.breakpoints[1:], self.breakpoints)):
            raise ValueError("breakpoints must be strictly increasing")

    def evaluate(self, a):
        if not self.breakpoints or a < self.breakpoints[0] or a >= self.breakpoints[-1]:
            return 0
        i = bisect.bisect_right(self.breakpoints, a) - 1
        return self.values[i]

    def l1_norm(self):
        return sum(abs(v) * (b1 - b0)
                   for v, b0, b1 in zip(self.values, self.breakpoints, self.breakpoints[1:]))


def _curve_from_events(events):
    """Build a StepCurve from (position, delta) events."""
    deltas = {}
    for pos, delta in events:
        deltas[pos] = deltas.get(pos, 0) + delta
    breaks = sorted(p for p, d in deltas.items() if d != 0)
    if not breaks:
        return StepCurve((), ())
    values = []
    level = 0
    for p in breaks[:-1]:
        level += deltas[p]
        values.append(level)
    # Trim zero-valued spans at either end left by cancelling events.
    while values and values[0] == 0:
        breaks.pop(0)
        values.pop(0)
    while values and values[-1] == 0:
        breaks.pop()
        values.pop()
    if not values:
        return StepCurve((), ())
    return StepCurve(tuple(breaks), tuple(values))


def betti_curve(d: PersistenceDiagram, degree: int) -> StepCurve:
    """Number of degree-``degree`` bars containing each point."""
    events = []
    for b, death, k in d.points:
        if k == degree:
            events.append((b, 1))
            events.append((death, -1))
    return _curve_from_events(events)


def euler_curve(curves) -> StepCurve:
    """Alternating sum of Betti curves, merged on the union of breakpoints."""
    events = []
    for k, curve in enumerate(curves):
        sign = -1 if k % 2 else 1
        prev = 0
        for b, v in zip(curve.breakpoints, list(curve.values) + [0]):
            events.append((b, sign * (v - prev)))
            prev = v
    return _curve_from_events(events)


def simplex_count_curve(cx: FilteredComplex, dim: int) -> StepCurve:
    """Cumulative count of ``dim``-cells entering the filtration.

    The count never returns to zero on its own, so the support is closed by a
    terminal breakpoint one unit past the last jump.
    """
    deltas = {}
    for c in cx.cells:
        if c.dim == dim:
            deltas[c.value] = deltas.get(c.value, 0) + 1
    if not deltas:
        return StepCurve((), ())
    breaks = sorted(deltas)
    values = []
    total = 0
    for p in breaks:
        total += deltas[p]
        values.append(total)
    return StepCurve(tuple(breaks) + (breaks[-1] + 1.0,), tuple(values))
