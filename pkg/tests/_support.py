"""Shared helpers and strategies for the test-suite."""

from __future__ import annotations

from hypothesis import strategies as st

from gridknot.convert import random_diagram
from gridknot.grid import GridDiagram, all_orientations, edge_directions
from gridknot.moves import CycCols, CycRows, Stab, XchgCols, XchgRows


@st.composite
def diagrams(draw, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_diagram(n, seed)


def naive_key(D: GridDiagram) -> tuple:
    """Smallest column list over every row shift and column rotation, by brute force."""
    n = D.n
    best = None
    for s in range(n):
        for c in range(n):
            cols = D.columns[c:] + D.columns[:c]
            enc = tuple(tuple(sorted(((a - s) % n, (b - s) % n))) for a, b in cols)
            if best is None or enc < best:
                best = enc
    return best


def line_map(D: GridDiagram, m) -> tuple[str, dict[int, int]]:
    """Lines that keep their direction under ``m`` and where they go.

    Column moves and stabilizations keep every vertical edge's direction; row
    moves keep every horizontal edge's direction (a wrapping move may flip the
    other kind).
    """
    n = D.n
    if isinstance(m, XchgCols):
        i, i2 = m.i % n, (m.i + 1) % n
        return "col", {c: (i2 if c == i else i if c == i2 else c) for c in range(n)}
    if isinstance(m, CycCols):
        return "col", {c: (c - m.k) % n for c in range(n)}
    if isinstance(m, Stab):
        nc = m.col + 1 if m.quadrant in ("NW", "SW") else m.col
        return "col", {c: c + (c >= nc) for c in range(n)}
    if isinstance(m, XchgRows):
        j, j2 = m.j % n, (m.j + 1) % n
        return "row", {r: (j2 if r == j else j if r == j2 else r) for r in range(n)}
    if isinstance(m, CycRows):
        return "row", {r: (r - m.k) % n for r in range(n)}
    raise TypeError(m)


def transport(D: GridDiagram, orientation, m, D2: GridDiagram):
    """The orientation of ``D2 = apply(D, m)`` agreeing with ``orientation`` on ``D``."""
    kind, lmap = line_map(D, m)
    pick = 0 if kind == "col" else 1
    dirs = edge_directions(D, orientation)[pick]
    for o2 in all_orientations(D2, fix_first=False):
        dirs2 = edge_directions(D2, o2)[pick]
        if all(dirs2[lmap[x]] == dirs[x] for x in range(D.n)):
            return o2
    raise AssertionError("no matching orientation")
