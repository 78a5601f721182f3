"""Elementary moves on grid diagrams and the generalized moves built from them.

Moves are small immutable records; :func:`apply` interprets them against a
concrete diagram.  Column and row indices in exchange and destabilization moves
are cyclic: ``XchgCols(n - 1)`` exchanges the last and the first column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import NotApplicable, SharedEndpoint, SizeFloor, WindowViolation
from .grid import GridDiagram, VertexRef, _canon, canonical_key

__all__ = [
    "Move",
    "CycCols",
    "CycRows",
    "XchgCols",
    "XchgRows",
    "Stab",
    "Destab",
    "QUADRANTS",
    "MoveSequence",
    "interleaved",
    "applicable_moves",
    "exchange_moves",
    "destabilizations",
    "stabilizations",
    "apply",
    "apply_all",
    "inverse_moves",
    "invert_sequence",
    "cyclic_shift_moves",
    "generalized_stabilization",
    "generalized_exchange",
    "move_from_dict",
]

QUADRANTS = ("NE", "NW", "SE", "SW")


@dataclass(frozen=True)
class CycCols:
    """Move the ``k`` leftmost columns to the right end."""

    k: int = 1

    def to_dict(self):
        return {"t": "CycCols", "k": self.k}


@dataclass(frozen=True)
class CycRows:
    """Move the ``k`` bottom rows to the top."""

    k: int = 1

    def to_dict(self):
        return {"t": "CycRows", "k": self.k}


@dataclass(frozen=True)
class XchgCols:
    """Exchange column ``i`` with column ``(i + 1) % n``."""

    i: int

    def to_dict(self):
        return {"t": "XchgCols", "i": self.i}


@dataclass(frozen=True)
class XchgRows:
    """Exchange row ``j`` with row ``(j + 1) % n``."""

    j: int

    def to_dict(self):
        return {"t": "XchgRows", "j": self.j}


@dataclass(frozen=True)
class Stab:
    """Replace the vertex ``(col, row)`` by an L of three vertices.

    A new column is inserted next to ``col`` and a new row next to ``row``; the
    quadrant names the corner of the resulting 2x2 block that stays empty.  The
    created block always has lower-left corner ``(col, row)`` in the new
    diagram, so ``Destab(col, row)`` undoes the move.
    """

    col: int
    row: int
    quadrant: str

    def to_dict(self):
        return {"t": "Stab", "col": self.col, "row": self.row, "quadrant": self.quadrant}


@dataclass(frozen=True)
class Destab:
    """Collapse the 3-vertex block on columns ``{i, i+1}`` and rows ``{j, j+1}``."""

    i: int
    j: int

    def to_dict(self):
        return {"t": "Destab", "i": self.i, "j": self.j}


Move = Union[CycCols, CycRows, XchgCols, XchgRows, Stab, Destab]

_MOVE_TYPES = {cls.__name__: cls for cls in (CycCols, CycRows, XchgCols, XchgRows, Stab, Destab)}


def move_from_dict(d: dict) -> Move:
    try:
        cls = _MOVE_TYPES[d["t"]]
        args = {k: v for k, v in d.items() if k != "t"}
        return cls(**args)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed move {d!r}") from exc


@dataclass(frozen=True)
class MoveSequence:
    """A replayable certificate: moves leading from one combinatorial class to another."""

    initial: bytes
    moves: tuple
    final: bytes

    def __len__(self):
        return len(self.moves)

    def to_dict(self) -> dict:
        return {
            "initial": bytes(self.initial).hex(),
            "moves": [m.to_dict() for m in self.moves],
            "final": bytes(self.final).hex(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MoveSequence":
        try:
            return cls(
                bytes.fromhex(d["initial"]),
                tuple(move_from_dict(m) for m in d["moves"]),
                bytes.fromhex(d["final"]),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError("malformed move sequence") from exc

    @classmethod
    def build(cls, start: GridDiagram, moves: Iterable[Move]) -> "MoveSequence":
        moves = tuple(moves)
        end = apply_all(start, moves)
        return cls(canonical_key(start), moves, canonical_key(end))


# ---------------------------------------------------------------- predicates


def interleaved(p: Sequence[int], q: Sequence[int], n: int | None = None) -> bool:
    """True iff the chords ``p`` and ``q`` of a circle cross.

    Crossing does not depend on where the circle is cut, so the linear order of
    indices suffices; ``n`` is accepted for symmetry with the cyclic setting.
    """
    if set(p) & set(q):
        raise SharedEndpoint(f"pairs {tuple(p)} and {tuple(q)} share an endpoint")
    lo, hi = min(p), max(p)
    return (lo < q[0] < hi) != (lo < q[1] < hi)


def _exchangeable(p, q):
    a, b = p
    c, d = q
    if a == c or a == d or b == c or b == d:
        return False
    return (a < c < b) == (a < d < b)


def exchange_moves(D: GridDiagram) -> list[Move]:
    n = D.n
    cols, rows = D.columns, D.rows
    out: list[Move] = []
    for i in range(n):
        if _exchangeable(cols[i], cols[(i + 1) % n]):
            out.append(XchgCols(i))
    for j in range(n):
        if _exchangeable(rows[j], rows[(j + 1) % n]):
            out.append(XchgRows(j))
    return out


def _block(D, i, j):
    """Vertices of the cyclic 2x2 block at columns {i, i+1} and rows {j, j+1}."""
    n = D.n
    i2, j2 = (i + 1) % n, (j + 1) % n
    return [(c, r) for c in (i, i2) for r in (j, j2) if r in D.columns[c]]


def destabilizations(D: GridDiagram) -> list[Destab]:
    if D.n <= 2:
        return []
    n = D.n
    out = []
    # A 3-vertex block needs a column whose rows are cyclically adjacent.
    for i, (a, b) in enumerate(D.columns):
        if b - a == 1:
            j = a
        elif a == 0 and b == n - 1:
            j = n - 1
        else:
            continue
        for bi in ((i - 1) % n, i):
            if len(_block(D, bi, j)) == 3:
                out.append(Destab(bi, j))
    return sorted(set(out), key=lambda m: (m.i, m.j))


def stabilizations(D: GridDiagram) -> list[Stab]:
    return [Stab(v.col, v.row, q) for v in D.vertices() for q in QUADRANTS]


def applicable_moves(D: GridDiagram, include_stabilizations: bool = False) -> list[Move]:
    """Exchanges, destabilizations and the two cyclic generators applicable to ``D``."""
    moves: list[Move] = exchange_moves(D)
    moves.extend(destabilizations(D))
    moves.extend([CycCols(1), CycRows(1)])
    if include_stabilizations:
        moves.extend(stabilizations(D))
    return moves


# --------------------------------------------------------------- application


def _cyc_cols(D, k):
    k %= D.n
    cols = D.columns
    return GridDiagram._trusted(cols[k:] + cols[:k])


def _cyc_rows(D, k):
    n = D.n
    out = []
    for a, b in D.columns:
        a, b = (a - k) % n, (b - k) % n
        out.append((a, b) if a < b else (b, a))
    return GridDiagram._trusted(out)


def _xchg_cols(D, i):
    n = D.n
    i %= n
    i2 = (i + 1) % n
    if not _exchangeable(D.columns[i], D.columns[i2]):
        raise NotApplicable(f"columns {i} and {i2} share a row or interleave")
    cols = list(D.columns)
    cols[i], cols[i2] = cols[i2], cols[i]
    return GridDiagram._trusted(cols)


def _swap_rows(D, j, j2):
    out = []
    for a, b in D.columns:
        a = j2 if a == j else j if a == j2 else a
        b = j2 if b == j else j if b == j2 else b
        out.append((a, b) if a < b else (b, a))
    return GridDiagram._trusted(out)


def _xchg_rows(D, j):
    n = D.n
    j %= n
    j2 = (j + 1) % n
    if not _exchangeable(D.rows[j], D.rows[j2]):
        raise NotApplicable(f"rows {j} and {j2} share a column or interleave")
    return _swap_rows(D, j, j2)


def _destab(D, i, j):
    n = D.n
    if not (0 <= i < n and 0 <= j < n):
        raise NotApplicable(f"block ({i}, {j}) out of range for n={n}")
    block = _block(D, i, j)
    if len(block) != 3:
        raise NotApplicable(f"block ({i}, {j}) holds {len(block)} vertices, not 3")
    if n <= 2:
        raise SizeFloor("destabilization would leave a diagram of size 1")
    i2, j2 = (i + 1) % n, (j + 1) % n
    cs = [c for c, _ in block]
    rs = [r for _, r in block]
    c_full = max((i, i2), key=cs.count)  # column holding two block vertices
    r_full = max((j, j2), key=rs.count)
    c_keep = i2 if c_full == i else i
    r_keep = j2 if r_full == j else j
    out = []
    for c, (a, b) in enumerate(D.columns):
        if c == c_full:
            continue
        if c == c_keep:
            a, b = (r_keep if a == r_full else a), (r_keep if b == r_full else b)
        a -= a > r_full
        b -= b > r_full
        out.append((a, b) if a < b else (b, a))
    return GridDiagram._trusted(out)


def _stab(D, col, row, quadrant):
    if quadrant not in QUADRANTS:
        raise NotApplicable(f"unknown quadrant {quadrant!r}")
    if not D.has_vertex(col, row):
        raise NotApplicable(f"({col}, {row}) is not a vertex")
    # The empty corner sits where the old vertex was; the new column/row go the
    # opposite way.
    new_col_right = quadrant in ("NW", "SW")
    new_row_above = quadrant in ("SE", "SW")
    nc = col + 1 if new_col_right else col
    nr = row + 1 if new_row_above else row
    old_c = col if new_col_right else col + 1  # index of the old column afterwards
    old_r = row if new_row_above else row + 1
    out = []
    for c, (a, b) in enumerate(D.columns):
        a += a >= nr
        b += b >= nr
        if c == col:
            # The old column now reaches the new row instead of the old one.
            a, b = (nr if a == old_r else a), (nr if b == old_r else b)
        out.append((a, b) if a < b else (b, a))
    new_pair = (min(nr, old_r), max(nr, old_r))
    out.insert(nc, new_pair)
    return GridDiagram._trusted(out)


def apply(D: GridDiagram, m: Move) -> GridDiagram:
    if isinstance(m, CycCols):
        return _cyc_cols(D, m.k)
    if isinstance(m, CycRows):
        return _cyc_rows(D, m.k)
    if isinstance(m, XchgCols):
        return _xchg_cols(D, m.i)
    if isinstance(m, XchgRows):
        return _xchg_rows(D, m.j)
    if isinstance(m, Destab):
        return _destab(D, m.i, m.j)
    if isinstance(m, Stab):
        return _stab(D, m.col, m.row, m.quadrant)
    raise TypeError(f"not a move: {m!r}")


def apply_all(D: GridDiagram, moves: Iterable[Move]) -> GridDiagram:
    for m in moves:
        D = apply(D, m)
    return D


# ------------------------------------------------------------------ inverses


def cyclic_shift_moves(row_shift: int, col_shift: int) -> list[Move]:
    out: list[Move] = []
    if row_shift:
        out.append(CycRows(row_shift))
    if col_shift:
        out.append(CycCols(col_shift))
    return out


def _shift_between(src: GridDiagram, dst: GridDiagram) -> list[Move]:
    """Cyclic moves turning ``src`` into exactly ``dst`` (same class assumed)."""
    ks, rs, cs = _canon(src.columns, src.n)
    kd, rd, cd = _canon(dst.columns, dst.n)
    if ks != kd:
        raise ValueError("diagrams are not cyclic shifts of each other")
    n = src.n
    moves = cyclic_shift_moves(rs, cs) + cyclic_shift_moves((-rd) % n, (-cd) % n)
    # Merge into at most one move per axis.
    r = sum(m.k for m in moves if isinstance(m, CycRows)) % n
    c = sum(m.k for m in moves if isinstance(m, CycCols)) % n
    merged = cyclic_shift_moves(r, c)
    if apply_all(src, merged) == dst:
        return merged
    # Symmetric diagrams can canonicalize through several shifts; search directly.
    for r in range(n):
        shifted = _cyc_rows(src, r)
        for c in range(n):
            if _cyc_cols(shifted, c) == dst:
                return cyclic_shift_moves(r, c)
    raise AssertionError("unreachable: equal keys imply a shift")


def inverse_moves(D: GridDiagram, m: Move) -> list[Move]:
    """Moves undoing ``m`` when applied to ``apply(D, m)``."""
    n = D.n
    if isinstance(m, CycCols):
        return [CycCols((-m.k) % n)] if m.k % n else []
    if isinstance(m, CycRows):
        return [CycRows((-m.k) % n)] if m.k % n else []
    if isinstance(m, (XchgCols, XchgRows)):
        return [m]
    if isinstance(m, Stab):
        return [Destab(m.col, m.row)]
    if isinstance(m, Destab):
        after = _destab(D, m.i, m.j)
        block = _block(D, m.i, m.j)
        i2, j2 = (m.i + 1) % n, (m.j + 1) % n
        cs = [c for c, _ in block]
        rs = [r for _, r in block]
        c_full = max((m.i, i2), key=cs.count)
        r_full = max((m.j, j2), key=rs.count)
        c_keep = i2 if c_full == m.i else m.i
        r_keep = j2 if r_full == m.j else m.j
        # Empty corner relative to the block (cyclic left/right, bottom/top).
        east = c_keep == i2
        north = r_keep == j2
        quadrant = ("N" if north else "S") + ("E" if east else "W")
        vc = c_keep - (c_keep > c_full)
        vr = r_keep - (r_keep > r_full)
        stab = Stab(vc, vr, quadrant)
        rebuilt = _stab(after, vc, vr, quadrant)
        return [stab] + _shift_between(rebuilt, D)
    raise TypeError(f"not a move: {m!r}")


def invert_sequence(start: GridDiagram, moves: Sequence[Move]) -> tuple[GridDiagram, list[Move]]:
    """Replay ``moves`` from ``start``; return the end diagram and the undoing sequence."""
    undo: list[list[Move]] = []
    D = start
    for m in moves:
        undo.append(inverse_moves(D, m))
        D = apply(D, m)
    inv = [m for step in reversed(undo) for m in step]
    return D, inv


# ------------------------------------------------------------ generalized moves


def _generalized_stab_result(D, row, gap):
    """New column at index ``gap`` splitting row ``row``: the left endpoint stays
    on ``row`` and the right endpoint moves to a new row just above it."""
    a, b = D.rows[row]
    out = []
    for c, (p, q) in enumerate(D.columns):
        p += p > row
        q += q > row
        if c == b:
            p, q = (row + 1 if p == row else p), (row + 1 if q == row else q)
        out.append((p, q) if p < q else (q, p))
    out.insert(gap, (row, row + 1))
    return GridDiagram._trusted(out)


def generalized_stabilization(D: GridDiagram, row: int, gap: int) -> tuple[GridDiagram, MoveSequence]:
    """Split the horizontal edge on ``row`` at the column gap ``gap``.

    ``gap`` ranges over ``0..n``: the new vertical edge becomes column ``gap`` of
    the result.  The left endpoint of the edge stays on ``row``; the right one
    is carried by a new row directly above.  Returns the result and an
    elementary move sequence (one stabilization plus column exchanges) that
    produces it.
    """
    n = D.n
    if not 0 <= row < n:
        raise NotApplicable(f"row {row} out of range")
    if not 0 <= gap <= n:
        raise NotApplicable(f"gap {gap} out of range 0..{n}")
    a, b = D.rows[row]
    target = _generalized_stab_result(D, row, gap)

    # Start next to the endpoint on the gap's side, avoiding the other endpoint.
    options = []
    if gap <= a:
        options.append(("a", "left"))
    elif gap <= b:
        options += [("a", "right"), ("b", "left")]
    else:
        options.append(("b", "right"))
    best = None
    for end, side in options:
        if end == "a":
            stab = Stab(a, row, "NW" if side == "right" else "NE")
        else:
            stab = Stab(b, row, "SW" if side == "right" else "SE")
        # Position of the new column right after the stabilization.
        base = a if end == "a" else b
        pos = base + 1 if side == "right" else base
        moves: list[Move] = [stab]
        if gap > pos:
            moves += [XchgCols(k) for k in range(pos, gap)]
        else:
            moves += [XchgCols(k - 1) for k in range(pos, gap, -1)]
        if best is None or len(moves) < len(best):
            best = moves
    seq = MoveSequence(canonical_key(D), tuple(best), canonical_key(target))
    return target, seq


def _chord_crosses(pair, lo, hi):
    """Does a row with columns ``pair`` cross the gap chord enclosing columns lo..hi-1?"""
    return (lo <= pair[0] < hi) != (lo <= pair[1] < hi)


def _window(n, t1, t2):
    """Rows from gap ``t1`` up to gap ``t2`` (cyclic, half-open)."""
    return [(t1 + k) % n for k in range((t2 - t1) % n)]


def generalized_exchange(
    D: GridDiagram, s1: int, s2: int, s3: int, t1: int, t2: int
) -> tuple[GridDiagram, MoveSequence]:
    """Interchange the column blocks ``s1..s2-1`` and ``s2..s3-1``.

    Gaps ``t1`` and ``t2`` (row ``t`` sits just above gap ``t``) split the rows
    into two cyclic windows: rows in ``[t1, t2)`` may not cross the first block,
    rows in ``[t2, t1)`` may not cross the second.  Returns the result and a
    sequence of elementary exchanges producing it.
    """
    n = D.n
    if not 0 <= s1 < s2 < s3 <= n:
        raise NotApplicable(f"need 0 <= s1 < s2 < s3 <= {n}, got {s1}, {s2}, {s3}")
    if not (0 <= t1 < n and 0 <= t2 < n):
        raise NotApplicable("row gaps out of range")
    win_a = _window(n, t1, t2)
    win_b = _window(n, t2, t1) if t1 != t2 else list(range(n))
    if t1 == t2:
        win_a = []
    rows = D.rows
    for r in win_a:
        if _chord_crosses(rows[r], s1, s2):
            raise WindowViolation(r, f"row {r} crosses the block {s1}..{s2 - 1}")
    for r in win_b:
        if _chord_crosses(rows[r], s2, s3):
            raise WindowViolation(r, f"row {r} crosses the block {s2}..{s3 - 1}")

    cols = D.columns
    target = GridDiagram._trusted(cols[:s1] + cols[s2:s3] + cols[s1:s2] + cols[s3:])

    moves: list[Move] = []
    cur = D

    def push(m):
        nonlocal cur
        cur = apply(cur, m)
        moves.append(m)

    def in_x(c):
        return s1 <= c < s2

    def in_y(c):
        return s2 <= c < s3

    # Sort each window by row exchanges so that the rows touching the first
    # block become contiguous, and likewise for the second block:
    #   window A: [rows inside block X] [other rows]
    #   window B: [rows inside block Y] [other rows]
    def sort_window(start, length, inside):
        # Bubble rows satisfying ``inside`` toward the window start.
        for _ in range(length):
            swapped = False
            for k in range(length - 1):
                j = (start + k) % n
                j2 = (j + 1) % n
                if not inside(cur.rows[j]) and inside(cur.rows[j2]):
                    push(XchgRows(j))
                    swapped = True
            if not swapped:
                break

    row_moves_start = len(moves)
    sort_window(t1, len(win_a), lambda p: in_x(p[0]) and in_x(p[1]))
    sort_window(t2, len(win_b), lambda p: in_y(p[0]) and in_y(p[1]))
    row_moves = moves[row_moves_start:]

    # Now no column of X interleaves a column of Y: slide Y left across X.
    width_x = s2 - s1
    for idx in range(s3 - s2):
        pos = s2 + idx
        for k in range(width_x):
            push(XchgCols(pos - 1 - k))

    # Row exchanges commute with column permutations; undo them.
    for m in reversed(row_moves):
        push(m)
    assert cur == target
    seq = MoveSequence(canonical_key(D), tuple(moves), canonical_key(target))
    return target, seq
