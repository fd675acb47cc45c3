"""Filtered cell complexes from graphs, point clouds and height grids.

All builders produce a :class:`FilteredComplex` whose cells are totally
ordered by (filtration value, dimension, construction key), so faces always
precede cofaces and the order is deterministic for a given input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class WeightedGraph:
    """Complete undirected graph with symmetric edge weights (diagonal unused)."""

    n: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if self.n < 1 or w.shape != (self.n, self.n):
            raise ValueError(f"weights must be {self.n}x{self.n}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        off = ~np.eye(self.n, dtype=bool)
        if not np.allclose(w[off], w.T[off], rtol=0, atol=0):
            raise ValueError("weights must be symmetric")


@dataclass(frozen=True)
class DirectedWeightedGraph:
    """Directed graph, both orientations independent; ``present`` masks edges.

    The diagonal is ignored.  When ``present`` is omitted every off-diagonal
    edge exists (the complete directed graph).
    """

    n: int
    weights: np.ndarray
    present: np.ndarray | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if self.n < 1 or w.shape != (self.n, self.n):
            raise ValueError(f"weights must be {self.n}x{self.n}")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if self.present is None:
            mask = ~np.eye(self.n, dtype=bool)
        else:
            mask = np.asarray(self.present, dtype=bool).copy()
            if mask.shape != (self.n, self.n):
                raise ValueError("present mask has wrong shape")
            np.fill_diagonal(mask, False)
        object.__setattr__(self, "present", mask)

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable of ``(u, v, weight)`` directed edges."""
        w = np.zeros((n, n))
        mask = np.zeros((n, n), dtype=bool)
        for u, v, weight in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            w[u, v] = weight
            mask[u, v] = True
        return cls(n, w, mask)


@dataclass(frozen=True)
class HeightGrid:
    """Rectangular elevation grid; values in arbitrary (finite) height units."""

    rows: int
    cols: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if self.rows < 1 or self.cols < 1 or v.shape != (self.rows, self.cols):
            raise ValueError(f"values must be {self.rows}x{self.cols}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")

    @classmethod
    def from_array(cls, values):
        v = np.asarray(values, dtype=float)
        return cls(v.shape[0], v.shape[1], v)


@dataclass(frozen=True)
class Cell:
    dim: int
    value: float
    faces: tuple[int, ...]


@dataclass(frozen=True)
class FilteredComplex:
    """Totally ordered list of cells; every face appears before its cofaces."""

    cells: tuple[Cell, ...]

    def __len__(self):
        return len(self.cells)

    @property
    def max_value(self):
        return max((c.value for c in self.cells), default=0.0)

    def validate(self):
        """Check face-before-coface ordering and filtration monotonicity."""
        prev = None
        for i, cell in enumerate(self.cells):
            for f in cell.faces:
                if not 0 <= f < i:
                    raise ValueError(f"cell {i}: face {f} does not precede it")
                face = self.cells[f]
                if face.dim != cell.dim - 1:
                    raise ValueError(f"cell {i}: face {f} has wrong dimension")
                if face.value > cell.value:
                    raise ValueError(f"cell {i}: face {f} enters later")
            if prev is not None and (cell.value, cell.dim) < prev:
                raise ValueError(f"cell {i}: ordering violated")
            prev = (cell.value, cell.dim)
        return self

    def to_text(self):
        """One line per cell: ``dim value face_id*`` (ids are order indices)."""
        lines = []
        for cell in self.cells:
            parts = [str(cell.dim), repr(cell.value)] + [str(f) for f in cell.faces]
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        from topocorr.errors import ParseError

        cells = []
        for ln, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ParseError("expected 'dim value face_id*'", line=ln)
            try:
                dim = int(parts[0])
                value = float(parts[1])
                faces = tuple(int(p) for p in parts[2:])
            except ValueError:
                raise ParseError("malformed cell line", line=ln) from None
            cells.append(Cell(dim, value, faces))
        return cls(tuple(cells)).validate()


def _assemble(entries):
    """Order ``(key, dim, value, face_keys)`` entries and resolve face ids.

    Ties are broken by dimension and then by the construction key, giving a
    deterministic total order for any permissible input.
    """
    entries = sorted(entries, key=lambda e: (e[2], e[1], e[0]))
    index = {}
    cells = []
    for key, dim, value, face_keys in entries:
        faces = tuple(sorted(index[fk] for fk in face_keys))
        index[key] = len(cells)
        cells.append(Cell(dim, float(value), faces))
    return FilteredComplex(tuple(cells))


def build_flag_complex(g: WeightedGraph, max_dim: int) -> FilteredComplex:
    """Flag complex of a complete weighted graph.

    Vertices enter at 0; each k-clique (k <= max_dim+1) enters at the maximum
    of its edge weights.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    w = g.weights
    entries = [((v,), 0, 0.0, ()) for v in range(g.n)]
    for k in range(1, max_dim + 1):
        for combo in itertools.combinations(range(g.n), k + 1):
            value = max(w[a, b] for a, b in itertools.combinations(combo, 2))
            face_keys = [combo[:i] + combo[i + 1:] for i in range(len(combo))]
            entries.append((combo, k, value, face_keys))
    return _assemble(entries)


def build_directed_flag_complex(g: DirectedWeightedGraph, max_dim: int) -> FilteredComplex:
    """Directed flag complex: ordered tuples (v0..vk) with all edges vi->vj, i<j.

    Reciprocal edge pairs yield two distinct 1-simplices; a simplex enters at
    the maximum of its constituent edge weights.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    w, present = g.weights, g.present
    # Grow ordered cliques one terminal vertex at a time.
    frontier = [((v,), 0.0) for v in range(g.n)]
    entries = [((v,), 0, 0.0, ()) for v in range(g.n)]
    for k in range(1, max_dim + 1):
        nxt = []
        for tup, value in frontier:
            for v in range(g.n):
                if v in tup:
                    continue
                if all(present[u, v] for u in tup):
                    new_value = max(value, max(w[u, v] for u in tup))
                    new = tup + (v,)
                    face_keys = [new[:i] + new[i + 1:] for i in range(len(new))]
                    entries.append((new, k, new_value, face_keys))
                    nxt.append((new, new_value))
        frontier = nxt
    return _assemble(entries)


def build_rips_complex(points, max_dim: int, max_radius: float) -> FilteredComplex:
    """Vietoris-Rips complex on a Euclidean point cloud.

    Edges enter at their length (those above ``max_radius`` are excluded) and
    higher simplices at the maximum of their edge lengths.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a non-empty list of vectors")
    if max_dim < 1:
        raise ValueError("max_dim must be >= 1")
    if max_radius <= 0:
        raise ValueError("max_radius must be positive")
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))

    entries = [((v,), 0, 0.0, ()) for v in range(n)]
    neighbors = [set(np.nonzero(dist[v] <= max_radius)[0]) - {v} for v in range(n)]
    simplices = [[(v,) for v in range(n)]]
    for k in range(1, max_dim + 1):
        level = []
        for tup in simplices[k - 1]:
            common = set.intersection(*(neighbors[u] for u in tup)) if k > 1 else neighbors[tup[0]]
            for v in sorted(common):
                if v > tup[-1]:
                    new = tup + (v,)
                    value = max(dist[a, b] for a, b in itertools.combinations(new, 2))
                    face_keys = [new[:i] + new[i + 1:] for i in range(len(new))]
                    entries.append((new, k, value, face_keys))
                    level.append(new)
        simplices.append(level)
    return _assemble(entries)


def build_cubical_complex(grid: HeightGrid) -> FilteredComplex:
    """Top-cell cubical complex of a height grid.

    One 2-cell per grid entry at that height; every edge and vertex inherits
    the minimum over its incident 2-cells.
    """
    rows, cols, v = grid.rows, grid.cols, grid.values

    def squares_at_vertex(r, c):
        return [v[rr, cc] for rr in (r - 1, r) for cc in (c - 1, c)
                if 0 <= rr < rows and 0 <= cc < cols]

    entries = []
    # Vertices live on the (rows+1) x (cols+1) lattice.
    for r in range(rows + 1):
        for c in range(cols + 1):
            entries.append(((0, r, c, 0), 0, min(squares_at_vertex(r, c)), ()))
    # Horizontal edges: (r, c)-(r, c+1); vertical edges: (r, c)-(r+1, c).
    for r in range(rows + 1):
        for c in range(cols):
            incident = [v[rr, c] for rr in (r - 1, r) if 0 <= rr < rows]
            entries.append(((1, r, c, 0), 1, min(incident),
                            [(0, r, c, 0), (0, r, c + 1, 0)]))
    for r in range(rows):
        for c in range(cols + 1):
            incident = [v[r, cc] for cc in (c - 1, c) if 0 <= cc < cols]
            entries.append(((1, r, c, 1), 1, min(incident),
                            [(0, r, c, 0), (0, r + 1, c, 0)]))
    for r in range(rows):
        for c in range(cols):
            entries.append(((2, r, c, 0), 2, v[r, c],
                            [(1, r, c, 0), (1, r + 1, c, 0),
                             (1, r, c, 1), (1, r, c + 1, 1)]))
    return _assemble(entries)
