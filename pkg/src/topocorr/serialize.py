"""Text and CSV formats for diagrams, landscapes, curves and matrices."""

from __future__ import annotations

import csv
import io

import numpy as np

from topocorr.errors import ParseError
from topocorr.metrics import DistanceMatrix
from topocorr.persistence import PersistenceDiagram
from topocorr.summaries import PersistenceLandscape, StepCurve


def diagram_to_csv(d: PersistenceDiagram) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["degree", "birth", "death"])
    for b, death, k in d.points:
        writer.writerow([k, repr(b), repr(death)])
    return out.getvalue()


def diagram_from_csv(text: str, cap=None) -> PersistenceDiagram:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty diagram CSV", line=1)
    header = [c.strip().lower() for c in rows[0]]
    if header[:3] != ["degree", "birth", "death"]:
        raise ParseError("expected header degree,birth,death", line=1)
    points = []
    for ln, row in enumerate(rows[1:], start=2):
        try:
            points.append((float(row[1]), float(row[2]), int(row[0])))
        except (ValueError, IndexError):
            raise ParseError("malformed diagram row", line=ln) from None
    return PersistenceDiagram(tuple(sorted(points, key=lambda p: (p[2], p[0], p[1]))),
                              cap=cap)


def landscape_to_text(l: PersistenceLandscape) -> str:
    """One line per level: alternating t and value fields."""
    lines = []
    for level in l.levels:
        fields = []
        for t, v in level:
            fields.append(repr(t))
            fields.append(repr(v))
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def landscape_from_text(text: str) -> PersistenceLandscape:
    levels = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) % 2 != 0:
            raise ParseError("odd field count in landscape level", line=ln)
        vals = [float(p) for p in parts]
        levels.append(tuple(zip(vals[::2], vals[1::2])))
    return PersistenceLandscape(tuple(levels))


def curve_to_csv(c: StepCurve) -> str:
    """Rows of ``breakpoint,value``; the final breakpoint carries the exit value 0."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["breakpoint", "value"])
    for b, v in zip(c.breakpoints, list(c.values) + [0]):
        writer.writerow([repr(b), v])
    return out.getvalue()


def curve_from_csv(text: str) -> StepCurve:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows or [c.strip().lower() for c in rows[0][:2]] != ["breakpoint", "value"]:
        raise ParseError("expected header breakpoint,value", line=1)
    breaks, values = [], []
    for ln, row in enumerate(rows[1:], start=2):
        try:
            breaks.append(float(row[0]))
            values.append(int(row[1]))
        except (ValueError, IndexError):
            raise ParseError("malformed curve row", line=ln) from None
    if not breaks:
        return StepCurve((), ())
    return StepCurve(tuple(breaks), tuple(values[:-1]))


def matrix_to_csv(m: DistanceMatrix) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([m.label] * m.n)
    for row in m.entries:
        writer.writerow([repr(float(x)) for x in row])
    return out.getvalue()


def matrix_from_csv(text: str) -> DistanceMatrix:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise ParseError("matrix CSV needs a label header and entries", line=1)
    label = rows[0][0]
    entries = []
    for ln, row in enumerate(rows[1:], start=2):
        try:
            entries.append([float(x) for x in row])
        except ValueError:
            raise ParseError("malformed matrix row", line=ln) from None
    arr = np.array(entries)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ParseError("matrix is not square", line=2)
    return DistanceMatrix(arr.shape[0], arr, label)


def labeled_matrix_to_csv(matrix: np.ndarray, labels) -> str:
    """Square matrix with a label header row and label column (dCor output)."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([""] + list(labels))
    for label, row in zip(labels, matrix):
        writer.writerow([label] + [repr(float(x)) for x in row])
    return out.getvalue()


def weights_to_text(weights) -> str:
    return "\n".join(repr(float(w)) for w in weights) + "\n"


def weights_from_text(text: str):
    return np.array([float(line) for line in text.split() if line.strip()])
