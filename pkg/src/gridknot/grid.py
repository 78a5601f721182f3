"""Rectangular (grid) diagrams: the value type, validation, canonical form,
duality, link components, orientations and file formats.

A diagram of size ``n`` is stored as ``n`` column pairs: column ``c`` carries a
vertical edge between the two rows listed in ``columns[c]``.  Rows and columns
are numbered from 0, row 0 at the bottom and column 0 on the left.  Only the
order of coordinates matters, so this encoding loses nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DegeneratePair,
    ParseError,
    RowCountError,
    RowIndexError,
    SizeError,
)

__all__ = [
    "GridDiagram",
    "VertexRef",
    "LinkComponent",
    "Orientation",
    "CanonicalKey",
    "validate",
    "trivial_diagram",
    "components",
    "default_orientation",
    "all_orientations",
    "transpose_dual",
    "canonical_key",
    "canonical_form",
    "render_ascii",
    "read_diagram",
    "write_diagram",
    "loads",
    "dumps",
]


class VertexRef(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True)
class GridDiagram:
    n: int
    columns: tuple[tuple[int, int], ...]

    def __post_init__(self):
        checked = _check(self.n, self.columns)
        object.__setattr__(self, "columns", checked)

    @classmethod
    def _trusted(cls, columns: Sequence[tuple[int, int]]) -> "GridDiagram":
        # Skips validation; callers guarantee sorted, valid pairs.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", len(columns))
        object.__setattr__(obj, "columns", tuple(columns))
        return obj

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable[int]]) -> "GridDiagram":
        cols = [tuple(p) for p in columns]
        return cls(len(cols), tuple(cols))

    @cached_property
    def rows(self) -> tuple[tuple[int, int], ...]:
        """For every row, the sorted pair of columns whose edges end on it."""
        acc: list[list[int]] = [[] for _ in range(self.n)]
        for c, (a, b) in enumerate(self.columns):
            acc[a].append(c)
            acc[b].append(c)
        return tuple((p[0], p[1]) for p in acc)

    @property
    def complexity(self) -> int:
        return self.n

    def vertices(self) -> list[VertexRef]:
        return [VertexRef(c, r) for c, pair in enumerate(self.columns) for r in pair]

    def has_vertex(self, col: int, row: int) -> bool:
        return 0 <= col < self.n and row in self.columns[col]

    def to_dict(self) -> dict:
        return {"n": self.n, "columns": [list(p) for p in self.columns]}

    def __str__(self) -> str:
        return render_ascii(self)


def _check(n, columns) -> tuple[tuple[int, int], ...]:
    if not isinstance(n, int) or n < 2:
        raise SizeError(f"grid size must be an integer >= 2, got {n!r}")
    if len(columns) != n:
        raise SizeError(f"expected {n} column pairs, got {len(columns)}")
    counts = [0] * n
    out = []
    for c, pair in enumerate(columns):
        pair = tuple(pair)
        if len(pair) != 2:
            raise SizeError(f"column {c} has {len(pair)} entries instead of 2")
        a, b = pair
        for r in (a, b):
            if not isinstance(r, int) or isinstance(r, bool):
                raise SizeError(f"column {c} has non-integer row {r!r}")
            if not 0 <= r < n:
                raise RowIndexError(c, r, n)
        if a == b:
            raise DegeneratePair(c, a)
        counts[a] += 1
        counts[b] += 1
        out.append((a, b) if a < b else (b, a))
    for r, k in enumerate(counts):
        if k != 2:
            raise RowCountError(r, k)
    return tuple(out)


def validate(n: int, columns: Iterable[Iterable[int]]) -> GridDiagram:
    """Build a checked diagram from raw data, raising a ``GridError`` subclass."""
    return GridDiagram(n, tuple(tuple(p) for p in columns))


def trivial_diagram() -> GridDiagram:
    return GridDiagram._trusted(((0, 1), (0, 1)))


# ---------------------------------------------------------------- components


@dataclass(frozen=True)
class LinkComponent:
    """A closed curve of the diagram.

    ``cycle`` starts at the component's lexicographically smallest vertex and
    leaves it along its vertical edge, so consecutive vertices alternate between
    sharing a column and sharing a row.
    """

    cycle: tuple[VertexRef, ...]

    def __len__(self) -> int:
        return len(self.cycle)


Orientation = tuple[int, ...]
"""One bit per component (in ``components`` order); 1 reverses the cycle."""


def _other(pair, x):
    return pair[1] if pair[0] == x else pair[0]


def components(D: GridDiagram) -> list[LinkComponent]:
    seen = set()
    comps = []
    for c in range(D.n):
        start = VertexRef(c, D.columns[c][0])
        if start in seen:
            continue
        cycle = []
        col, row = start
        vertical = True
        while True:
            v = VertexRef(col, row)
            if v in seen:
                break
            seen.add(v)
            cycle.append(v)
            if vertical:
                row = _other(D.columns[col], row)
            else:
                col = _other(D.rows[row], col)
            vertical = not vertical
        comps.append(LinkComponent(tuple(cycle)))
    return comps


def default_orientation(D: GridDiagram) -> Orientation:
    return (0,) * len(components(D))


def all_orientations(D: GridDiagram, fix_first: bool = True) -> list[Orientation]:
    """Every orientation, optionally up to global reversal (first bit fixed)."""
    k = len(components(D))
    free = k - 1 if fix_first else k
    out = []
    for m in range(1 << free):
        bits = [(m >> i) & 1 for i in range(free)]
        out.append(tuple([0] + bits if fix_first else bits))
    return out


def oriented_cycles(D: GridDiagram, orientation: Orientation | None = None) -> list[list[VertexRef]]:
    """Vertex cycles in traversal order for the given orientation."""
    comps = components(D)
    if orientation is None:
        orientation = (0,) * len(comps)
    if len(orientation) != len(comps):
        raise ValueError(f"orientation has {len(orientation)} bits for {len(comps)} components")
    out = []
    for comp, bit in zip(comps, orientation):
        cyc = list(comp.cycle)
        if bit:
            cyc = [cyc[0]] + cyc[:0:-1]
        out.append(cyc)
    return out


def edge_directions(D: GridDiagram, orientation: Orientation | None = None):
    """Return ``(up, right)``: per column, whether its edge is traversed upward;
    per row, whether its edge is traversed left to right."""
    up = [False] * D.n
    right = [False] * D.n
    for cyc in oriented_cycles(D, orientation):
        m = len(cyc)
        for k in range(m):
            a, b = cyc[k], cyc[(k + 1) % m]
            if a.col == b.col:
                up[a.col] = b.row > a.row
            else:
                right[a.row] = b.col > a.col
    return up, right


# ------------------------------------------------------------------- duality


def transpose_dual(D: GridDiagram) -> GridDiagram:
    """Swap the roles of rows and columns (plain transpose)."""
    return GridDiagram._trusted(D.rows)


# ---------------------------------------------------------- canonical form


class CanonicalKey(bytes):
    """Minimal encoding of a diagram over all cyclic row and column shifts."""

    @classmethod
    def from_hex(cls, text: str) -> "CanonicalKey":
        return cls(bytes.fromhex(text))

    @property
    def n(self) -> int:
        return len(self) // 2

    def diagram(self) -> GridDiagram:
        return key_to_diagram(self)

    def __repr__(self) -> str:
        return f"CanonicalKey({self.hex()!r})"


def canonical_form(D: GridDiagram) -> tuple[bytes, int, int]:
    """Return ``(key, row_shift, col_shift)``.

    Applying ``CycRows(row_shift)`` and then ``CycCols(col_shift)`` to ``D``
    yields the diagram encoded by ``key``.
    """
    return _canon(D.columns, D.n)


def _canon(columns, n):
    # The minimal encoding starts with a pair (0, d); only shifts that put such
    # a pair with minimal d in front can win.
    dmin = n
    cands = []
    for c, (a, b) in enumerate(columns):
        d = b - a
        for s, dd in ((a, d), (b, n - d)):
            if dd < dmin:
                dmin = dd
                cands = [(s, c)]
            elif dd == dmin:
                cands.append((s, c))
    best = None
    best_s = best_c = 0
    for s, c in cands:
        seq = []
        for i in range(n):
            a, b = columns[(c + i) % n]
            a = (a - s) % n
            b = (b - s) % n
            if a < b:
                seq.append(a)
                seq.append(b)
            else:
                seq.append(b)
                seq.append(a)
        if best is None or seq < best:
            best, best_s, best_c = seq, s, c
    return bytes(best), best_s, best_c


def canonical_key(D: GridDiagram) -> CanonicalKey:
    return CanonicalKey(_canon(D.columns, D.n)[0])


def key_to_diagram(key: bytes) -> GridDiagram:
    cols = [(key[2 * i], key[2 * i + 1]) for i in range(len(key) // 2)]
    return GridDiagram._trusted(cols)


# ---------------------------------------------------------------- rendering


def render_ascii(D: GridDiagram) -> str:
    """Draw the diagram with '+' vertices, '-' and '|' edges, row 0 at the bottom.

    Vertical edges pass over horizontal ones, so crossings show as '|'.
    """
    width = 3 * (D.n - 1) + 1
    canvas = [[" "] * width for _ in range(D.n)]
    for r, (a, b) in enumerate(D.rows):
        for x in range(3 * a, 3 * b + 1):
            canvas[r][x] = "-"
    for c, (a, b) in enumerate(D.columns):
        for r in range(a, b + 1):
            canvas[r][3 * c] = "|"
    for c, (a, b) in enumerate(D.columns):
        canvas[a][3 * c] = "+"
        canvas[b][3 * c] = "+"
    return "\n".join("".join(line).rstrip() for line in reversed(canvas))


# --------------------------------------------------------------- file formats


def dumps(D: GridDiagram, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(D.to_dict())
    if fmt == "text":
        return "\n".join([str(D.n)] + [f"{a} {b}" for a, b in D.columns]) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def loads(text: str, fmt: str = "json") -> GridDiagram:
    if fmt == "json":
        return _loads_json(text)
    if fmt == "text":
        return _loads_text(text)
    raise ValueError(f"unknown format {fmt!r}")


def _loads_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "n" not in data or "columns" not in data:
        raise ParseError('expected an object with keys "n" and "columns"')
    cols = data["columns"]
    if not isinstance(cols, list) or not all(isinstance(p, list) for p in cols):
        raise ParseError('"columns" must be a list of [r, r\'] pairs')
    return validate(data["n"], cols)


def _loads_text(text):
    n = None
    cols = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        fields = line.split()
        values = []
        pos = 0
        for f in fields:
            pos = line.index(f, pos)
            try:
                values.append(int(f))
            except ValueError:
                raise ParseError(f"expected an integer, got {f!r}", lineno, pos + 1) from None
            pos += len(f)
        if n is None:
            if len(values) != 1:
                raise ParseError("first line must hold the grid size only", lineno, 1)
            n = values[0]
            continue
        if len(values) != 2:
            raise ParseError(f"expected two row indices, got {len(values)} values", lineno, 1)
        cols.append(values)
    if n is None:
        raise ParseError("empty input")
    return validate(n, cols)


def _format_for(path, fmt):
    if fmt:
        return fmt
    return "text" if Path(path).suffix in (".txt", ".grid") else "json"


def read_diagram(path, fmt: str | None = None) -> GridDiagram:
    return loads(Path(path).read_text(), _format_for(path, fmt))


def write_diagram(D: GridDiagram, path, fmt: str | None = None) -> None:
    Path(path).write_text(dumps(D, _format_for(path, fmt)))
