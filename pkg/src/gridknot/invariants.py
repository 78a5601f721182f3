"""Crossings, turns, the writhe pair and two quick knottedness certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .grid import GridDiagram, Orientation, all_orientations, components, default_orientation, edge_directions
from .moves import _exchangeable

__all__ = [
    "WritheReport",
    "Verdict",
    "crossings",
    "crossing_signs",
    "corner_counts",
    "writhe_report",
    "writhe_pair",
    "writhe_test",
    "is_rigid",
    "crossing_bound",
]


def crossings(D: GridDiagram) -> list[tuple[int, int]]:
    """All ``(col, row)`` where the vertical edge of ``col`` passes over row ``row``."""
    rows = D.rows
    out = []
    for c, (a, b) in enumerate(D.columns):
        for r in range(a + 1, b):
            p, q = rows[r]
            if p < c < q:
                out.append((c, r))
    return out


def crossing_bound(n: int) -> float:
    return (n - 1) ** 2 / 2


def crossing_signs(D: GridDiagram, orientation: Orientation | None = None) -> dict[tuple[int, int], int]:
    """Sign of every crossing.

    A crossing is positive when the (over) vertical edge points up and the
    horizontal edge points left, or down and right; negative otherwise.
    """
    up, right = edge_directions(D, orientation)
    return {(c, r): (1 if up[c] != right[r] else -1) for c, r in crossings(D)}


def corner_counts(D: GridDiagram) -> tuple[int, int]:
    """``(n_plus, n_minus)``: turns whose edges point {E, N} or {W, S} are positive.

    The classification does not depend on orientation.
    """
    rows = D.rows
    pos = neg = 0
    for c, (a, b) in enumerate(D.columns):
        for r, other_r in ((a, b), (b, a)):
            p, q = rows[r]
            other_c = q if p == c else p
            if (other_r > r) == (other_c > c):
                pos += 1
            else:
                neg += 1
    return pos, neg


@dataclass(frozen=True)
class WritheReport:
    w: int
    n_plus: int
    n_minus: int
    w_plus: int
    w_minus: int
    orientation: Orientation

    @property
    def pair(self) -> tuple[int, int]:
        return (self.w_minus, self.w_plus)

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "w_plus": self.w_plus,
            "w_minus": self.w_minus,
            "orientation": list(self.orientation),
        }


def writhe_report(D: GridDiagram, orientation: Orientation | None = None) -> WritheReport:
    if orientation is None:
        orientation = default_orientation(D)
    w = sum(crossing_signs(D, orientation).values())
    n_plus, n_minus = corner_counts(D)
    # Both turn counts are even for every diagram.
    assert n_plus % 2 == 0 and n_minus % 2 == 0, (n_plus, n_minus)
    return WritheReport(
        w=w,
        n_plus=n_plus,
        n_minus=n_minus,
        w_plus=w + n_plus // 2,
        w_minus=w - n_minus // 2,
        orientation=tuple(orientation),
    )


def writhe_pair(D: GridDiagram, orientation: Orientation | None = None) -> tuple[int, int]:
    return writhe_report(D, orientation).pair


@dataclass(frozen=True)
class Verdict:
    status: str  # "CertifiedNontrivial" or "NoConclusion"
    components: int
    witness: Optional[dict] = None
    reports: tuple = field(default=(), compare=False)

    @property
    def nontrivial(self) -> bool:
        return self.status == "CertifiedNontrivial"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "components": self.components,
            "witness": self.witness,
            "writhes": [r.to_dict() for r in self.reports],
        }


def writhe_test(D: GridDiagram, all_orientations_: bool = True) -> Verdict:
    """Certify that ``D`` is not the trivial ``k``-component link.

    The trivial link satisfies ``w_minus <= -k`` and ``w_plus >= k`` for every
    orientation; a violation under any orientation is a certificate.  Global
    reversal leaves the pair unchanged, so only ``2**(k-1)`` orientations are
    tried.  ``NoConclusion`` never certifies triviality.
    """
    k = len(components(D))
    orients = all_orientations(D) if all_orientations_ else [default_orientation(D)]
    reports = []
    for o in orients:
        rep = writhe_report(D, o)
        reports.append(rep)
        if rep.w_minus > -k:
            return Verdict("CertifiedNontrivial", k, _witness("w_minus", rep, k), tuple(reports))
        if rep.w_plus < k:
            return Verdict("CertifiedNontrivial", k, _witness("w_plus", rep, k), tuple(reports))
    return Verdict("NoConclusion", k, None, tuple(reports))


def _witness(which, rep, k):
    if which == "w_minus":
        text = f"w_minus = {rep.w_minus} > -{k}"
    else:
        text = f"w_plus = {rep.w_plus} < {k}"
    return {"violated": text, "orientation": list(rep.orientation), "w_minus": rep.w_minus, "w_plus": rep.w_plus}


def is_rigid(D: GridDiagram) -> bool:
    """Every cyclically adjacent pair of columns, and of rows, is disjoint and interleaved."""
    n = D.n
    for seq in (D.columns, D.rows):
        for i in range(n):
            p, q = seq[i], seq[(i + 1) % n]
            if set(p) & set(q) or _exchangeable(p, q):
                return False
    return True
