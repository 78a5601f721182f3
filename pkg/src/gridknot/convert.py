"""Grid <-> braid conversion and diagram generators used as fixtures and corpora."""

from __future__ import annotations

import bisect
import random
import re
from dataclasses import dataclass
from math import gcd

from .errors import DegenerateParams, ParseError
from .grid import GridDiagram, Orientation, default_orientation, edge_directions, trivial_diagram
from .moves import (
    CycCols,
    CycRows,
    Move,
    MoveSequence,
    QUADRANTS,
    Stab,
    apply,
    exchange_moves,
)

__all__ = [
    "BraidWord",
    "grid_to_braid",
    "braid_to_grid",
    "torus_grid",
    "random_diagram",
    "random_unknot",
    "whitehead_fixtures",
    "zero_alexander_fixture",
    "connected_sum",
    "distant_union",
]


@dataclass(frozen=True)
class BraidWord:
    """A braid on ``strands`` strands; letter ``(i, s)`` is sigma_i to the power ``s``.

    Strands are numbered 1..m from the bottom.
    """

    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if not 1 <= i < self.strands:
                raise ValueError(f"generator index {i} out of range for {self.strands} strands")
            if s not in (1, -1):
                raise ValueError(f"generator sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    @property
    def exponent_sum(self) -> int:
        return sum(s for _, s in self.letters)

    def permutation(self) -> list[int]:
        """``perm[p]`` is the final position (0-based) of the strand starting at ``p``."""
        at = list(range(self.strands))  # at[position] = strand
        for i, _ in self.letters:
            at[i - 1], at[i] = at[i], at[i - 1]
        perm = [0] * self.strands
        for pos, strand in enumerate(at):
            perm[strand] = pos
        return perm

    def closure_components(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strands
        count = 0
        for p in range(self.strands):
            if not seen[p]:
                count += 1
                while not seen[p]:
                    seen[p] = True
                    p = perm[p]
        return count

    def to_text(self) -> str:
        body = " ".join(f"s{i}" if s > 0 else f"s-{i}" for i, s in self.letters)
        return f"{self.strands}: {body}".rstrip()

    @classmethod
    def from_text(cls, text: str) -> "BraidWord":
        head, sep, body = text.strip().partition(":")
        if not sep:
            raise ParseError('braid text must look like "m: s1 s-2 ..."', 1, 1)
        try:
            m = int(head)
        except ValueError:
            raise ParseError(f"bad strand count {head!r}", 1, 1) from None
        letters = []
        offset = len(head) + 1
        for tok in re.finditer(r"\S+", body):
            mt = re.fullmatch(r"s(-?)(\d+)", tok.group())
            if not mt:
                raise ParseError(f"bad generator {tok.group()!r}", 1, offset + tok.start() + 1)
            letters.append((int(mt.group(2)), -1 if mt.group(1) else 1))
        try:
            return cls(m, tuple(letters))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    def to_dict(self) -> dict:
        return {"strands": self.strands, "letters": [list(x) for x in self.letters]}

    @classmethod
    def from_dict(cls, d: dict) -> "BraidWord":
        try:
            return cls(int(d["strands"]), tuple(tuple(x) for x in d["letters"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed braid: {exc}") from None


# ------------------------------------------------------------ grid -> braid


def grid_to_braid(D: GridDiagram, orientation: Orientation | None = None) -> BraidWord:
    """Read a braid whose closure is the oriented diagram ``D``.

    Every leftward horizontal edge is replaced by two rays running off the left
    and right sides, so each vertical slice meets the same number ``m`` of
    rightward pieces.  Sweeping the columns left to right, each vertical edge
    retires one piece and starts another, passing over the pieces in between;
    a falling edge emits positive generators, a rising one negative.
    """
    if orientation is None:
        orientation = default_orientation(D)
    up, right = edge_directions(D, orientation)
    alive = sorted(r for r in range(D.n) if not right[r])
    m = len(alive)
    if m == 0:
        raise AssertionError("every closed curve has a leftward edge")
    letters: list[tuple[int, int]] = []
    for c, (a, b) in enumerate(D.columns):
        start, end = (a, b) if up[c] else (b, a)
        p = bisect.bisect_left(alive, start)
        assert p < len(alive) and alive[p] == start, "retired piece must be alive"
        del alive[p]
        q = bisect.bisect_left(alive, end)
        alive.insert(q, end)
        # 1-based positions before and after the move.
        # Signs agree with the crossing signs: a rising edge over rightward
        # pieces makes negative crossings.
        if q > p:
            letters.extend((k, -1) for k in range(p + 1, q + 1))
        elif q < p:
            letters.extend((k, 1) for k in range(p, q, -1))
        assert len(alive) == m
    return BraidWord(m, tuple(letters))


# ------------------------------------------------------------ braid -> grid


def braid_to_grid(b: BraidWord) -> GridDiagram:
    """Build a grid diagram of the closure of ``b``.

    Each strand owns an open row; a letter adds a column that closes the moving
    strand's row and opens a fresh row just below (positive letter) or just
    above (negative letter) its partner.  Strands that never move get one
    crossing-free column up front.  Closure columns join every final row to the
    initial row at the same position, ordered so that they cross nothing.

    The size is ``strands + letters + (number of strands that never move)``.
    """
    m = b.strands
    order: list[int] = list(range(m))  # row ids, bottom to top
    next_id = m
    at_pos = list(range(m))  # row id open at each position
    initial = list(at_pos)
    columns: list[tuple[int, int]] = []

    strands = list(range(m))
    movers = set()
    for i, s in b.letters:
        mover = i if s > 0 else i - 1
        movers.add(strands[mover])
        strands[i - 1], strands[i] = strands[i], strands[i - 1]

    def fresh_next_to(row_id, above):
        nonlocal next_id
        fid = next_id
        next_id += 1
        k = order.index(row_id)
        order.insert(k + 1 if above else k, fid)
        return fid

    for p in range(m):
        if p not in movers:  # strand p starts at position p
            f = fresh_next_to(at_pos[p], above=True)
            columns.append((at_pos[p], f))
            at_pos[p] = f

    for i, s in b.letters:
        lo, hi = i - 1, i
        if s < 0:
            f = fresh_next_to(at_pos[hi], above=True)
            columns.append((at_pos[lo], f))
            at_pos[lo], at_pos[hi] = at_pos[hi], f
        else:
            f = fresh_next_to(at_pos[lo], above=False)
            columns.append((at_pos[hi], f))
            at_pos[lo], at_pos[hi] = f, at_pos[lo]

    height = {rid: k for k, rid in enumerate(order)}
    rising = [p for p in range(m) if height[initial[p]] > height[at_pos[p]]]
    falling = [p for p in range(m) if height[initial[p]] < height[at_pos[p]]]
    for p in sorted(rising, reverse=True) + sorted(falling):
        columns.append((at_pos[p], initial[p]))

    return GridDiagram.from_columns([(height[x], height[y]) for x, y in columns])


# ---------------------------------------------------------------- generators


def torus_grid(p: int, q: int) -> GridDiagram:
    """The rigid ``(p+q)``-column diagram of the ``(p, q)`` torus link.

    Row ``r`` joins columns ``-r`` and ``p - r`` (mod ``p + q``).
    """
    if p < 1 or q < 1:
        raise DegenerateParams(f"torus parameters must be >= 1, got ({p}, {q})")
    n = p + q
    cols: list[list[int]] = [[] for _ in range(n)]
    for r in range(n):
        a, c = (-r) % n, (p - r) % n
        if a == c:
            raise DegenerateParams(f"row {r} would join column {a} to itself")
        cols[a].append(r)
        cols[c].append(r)
    return GridDiagram.from_columns(cols)


def torus_components(p: int, q: int) -> int:
    return gcd(p, q)


def random_diagram(n: int, seed=None) -> GridDiagram:
    """Uniformly random valid diagram of size ``n``.

    Shuffles the multiset of row endpoints into column pairs and rejects
    shuffles that put a row twice in one column; each valid diagram has the
    same number of preimages, so acceptance is uniform.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    slots = [r for r in range(n) for _ in (0, 1)]
    while True:
        rng.shuffle(slots)
        pairs = [(slots[2 * c], slots[2 * c + 1]) for c in range(n)]
        if all(a != b for a, b in pairs):
            return GridDiagram.from_columns(pairs)


def random_unknot(n: int, seed=None, min_moves: int = 20) -> tuple[GridDiagram, MoveSequence]:
    """Scramble the trivial diagram up to size ``n``.

    Exactly ``n - 2`` stabilizations are interleaved with random exchanges and
    cyclic permutations, at least ``min_moves`` moves in total.  The returned
    sequence leads from the trivial diagram to the result.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    n_stab = n - 2
    total = max(min_moves, n_stab)
    stab_at = set(rng.sample(range(total), n_stab))
    D = start = trivial_diagram()
    moves: list[Move] = []
    for step in range(total):
        if step in stab_at:
            v = rng.choice(D.vertices())
            m: Move = Stab(v.col, v.row, rng.choice(QUADRANTS))
        else:
            xs = exchange_moves(D)
            if xs and rng.random() < 0.85:
                m = rng.choice(xs)
            else:
                k = rng.randrange(1, D.n)
                m = CycCols(k) if rng.random() < 0.5 else CycRows(k)
        D = apply(D, m)
        moves.append(m)
    return D, MoveSequence.build(start, moves)


# -------------------------------------------------------------- compositions


def distant_union(D1: GridDiagram, D2: GridDiagram) -> GridDiagram:
    """Block-diagonal placement: ``D1`` bottom-left, ``D2`` top-right."""
    off = D1.n
    return GridDiagram.from_columns(list(D1.columns) + [(a + off, b + off) for a, b in D2.columns])


def connected_sum(D1: GridDiagram, D2: GridDiagram) -> GridDiagram:
    """Splice the last column of ``D1`` with the first column of ``D2``.

    The two rows ending on ``D1``'s last column are merged with the rows ending
    on ``D2``'s first column, so a vertical line between the two halves meets
    the result exactly twice.  Size is ``D1.n + D2.n - 2``.
    """
    p1, q1 = D1.columns[-1]
    p2, q2 = D2.columns[0]
    # Interleave row orders: (rows below p) p (rows between) q (rows above).
    def bands(n, p, q):
        return [list(range(0, p)), list(range(p + 1, q)), list(range(q + 1, n))]

    b1, b2 = bands(D1.n, p1, q1), bands(D2.n, p2, q2)
    new1: dict[int, int] = {}
    new2: dict[int, int] = {}
    k = 0
    for band in range(3):
        for r in b1[band]:
            new1[r] = k
            k += 1
        for r in b2[band]:
            new2[r] = k
            k += 1
        if band == 0:
            new1[p1] = new2[p2] = k
            k += 1
        elif band == 1:
            new1[q1] = new2[q2] = k
            k += 1
    cols = [(new1[a], new1[b]) for a, b in D1.columns[:-1]]
    cols += [(new2[a], new2[b]) for a, b in D2.columns[1:]]
    return GridDiagram.from_columns(cols)


# ------------------------------------------------------------------ fixtures


def whitehead_fixtures() -> tuple[GridDiagram, GridDiagram]:
    """Two 7-column diagrams of the Whitehead link: one rigid, one not.

    Hand-transcribed from drawings on a 20-unit lattice (column = x/20, row = y/20).
    """
    rigid = GridDiagram.from_columns([[4, 6], [0, 5], [2, 6], [1, 3], [2, 4], [0, 3], [1, 5]])
    loose = GridDiagram.from_columns([[3, 6], [0, 5], [2, 4], [3, 6], [1, 4], [0, 2], [1, 5]])
    return rigid, loose


def zero_alexander_fixture() -> GridDiagram:
    """A rigid 10-column two-component link with vanishing Alexander polynomial.

    Hand-transcribed from a drawing on a 10-unit lattice (column = x/10, row = y/10).
    """
    return GridDiagram.from_columns(
        [[4, 8], [7, 9], [3, 8], [2, 6], [0, 5], [4, 9], [3, 7], [1, 6], [0, 2], [1, 5]]
    )
