"""Exchange-orbit search, monotonic simplification, decomposition and census."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Union

from .errors import LimitExceeded, NotApplicable
from .grid import CanonicalKey, GridDiagram, canonical_form, canonical_key, key_to_diagram, transpose_dual
from .invariants import is_rigid
from .moves import (
    Move,
    MoveSequence,
    apply,
    cyclic_shift_moves,
    destabilizations,
    exchange_moves,
    move_from_dict,
)

__all__ = [
    "SearchConfig",
    "SimplifyOutcome",
    "OrbitResult",
    "OrbitSnapshot",
    "Cut",
    "Leaf",
    "DistantUnion",
    "ConnectedSum",
    "DecompositionTree",
    "CertificateCheck",
    "CensusReport",
    "exchange_orbit",
    "monotonic_simplify",
    "detect_split",
    "detect_composite",
    "factor_at",
    "split_at",
    "decompose",
    "leaves",
    "check_certificate",
    "census",
    "enumerate_diagrams",
    "read_snapshot",
    "write_snapshot",
]

SNAPSHOT_HEADER = "GRIDKNOT-ORBIT v1"
_PARALLEL_MIN = 512  # smaller frontiers are not worth shipping to workers
_CHUNK = 256


@dataclass(frozen=True)
class SearchConfig:
    max_orbit_states: int = 1_000_000
    max_wall_millis: int = 120_000
    parallelism: int = 1
    deterministic: bool = False

    def __post_init__(self):
        if self.max_orbit_states < 1 or self.max_wall_millis < 1:
            raise ValueError("search limits must be positive")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")

    @classmethod
    def from_env(cls, **overrides) -> "SearchConfig":
        """Defaults overridden by ``GRIDKNOT_MAX_ORBIT``/``GRIDKNOT_MAX_MILLIS``, then by ``overrides``."""
        kw = {}
        if os.environ.get("GRIDKNOT_MAX_ORBIT"):
            kw["max_orbit_states"] = int(os.environ["GRIDKNOT_MAX_ORBIT"])
        if os.environ.get("GRIDKNOT_MAX_MILLIS"):
            kw["max_wall_millis"] = int(os.environ["GRIDKNOT_MAX_MILLIS"])
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


# ---------------------------------------------------------------- cut scans


class Cut(NamedTuple):
    """A pair of cyclic column gaps; gap ``g`` lies just right of column ``g``.

    The two sides are columns ``g1+1..g2`` and ``g2+1..g1`` (cyclically).
    ``rows`` are the row chords crossing the cut.  With ``transposed`` set the
    gaps refer to rows of ``D`` (columns of its transpose).
    """

    g1: int
    g2: int
    rows: tuple[int, ...] = ()
    transposed: bool = False

    def to_dict(self) -> dict:
        return {"g1": self.g1, "g2": self.g2, "rows": list(self.rows), "transposed": self.transposed}


def _sides(n, g1, g2):
    inner = list(range(g1 + 1, g2 + 1))
    outer = [(g2 + 1 + k) % n for k in range(n - len(inner))]
    return inner, outer


def _scan_cuts(D: GridDiagram, want: int):
    """Yield ``(g1, g2, crossing_rows)`` for cuts crossed by exactly ``want`` rows."""
    n = D.n
    rows = D.rows
    for g1, g2 in combinations(range(n), 2):
        crossing = tuple(r for r, (a, b) in enumerate(rows) if (g1 < a <= g2) != (g1 < b <= g2))
        if len(crossing) == want:
            yield g1, g2, crossing


def detect_split(D: GridDiagram) -> Optional[Cut]:
    """First cut (lexicographic in the gaps) that no row crosses, if any."""
    for g1, g2, _ in _scan_cuts(D, 0):
        return Cut(g1, g2)
    return None


def _composite_in(D: GridDiagram, transposed: bool) -> Optional[Cut]:
    rows = D.rows
    for g1, g2, crossing in _scan_cuts(D, 2):
        inside = [g1 < a <= g2 for a, _ in rows]
        both = [(g1 < a <= g2) == (g1 < b <= g2) for a, b in rows]
        has_in = any(both[r] and inside[r] for r in range(D.n))
        has_out = any(both[r] and not inside[r] for r in range(D.n))
        if has_in and has_out:
            return Cut(g1, g2, crossing, transposed)
    return None


def detect_composite(D: GridDiagram) -> Optional[Cut]:
    """A cut crossed by exactly two rows with a whole row on each side.

    Vertical cuts of ``D`` are tried first, then vertical cuts of its transpose.
    """
    return _composite_in(D, False) or _composite_in(transpose_dual(D), True)


def _restrict(D: GridDiagram, cols: list[int], extra_left=None, extra_right=None) -> GridDiagram:
    pairs = [D.columns[c] for c in cols]
    if extra_left is not None:
        pairs.insert(0, extra_left)
    if extra_right is not None:
        pairs.append(extra_right)
    used = sorted({r for p in pairs for r in p})
    relabel = {r: k for k, r in enumerate(used)}
    return GridDiagram.from_columns([(relabel[a], relabel[b]) for a, b in pairs])


def split_at(D: GridDiagram, cut: Cut) -> tuple[GridDiagram, GridDiagram]:
    """The two sub-diagrams on either side of a split cut."""
    inner, outer = _sides(D.n, cut.g1, cut.g2)
    rows = D.rows
    if any((a in inner) != (b in inner) for a, b in rows):
        raise NotApplicable("a row crosses the cut")
    return _restrict(D, outer), _restrict(D, inner)


def factor_at(D: GridDiagram, cut: Cut) -> tuple[GridDiagram, GridDiagram]:
    """Cut a composite diagram into its two summands.

    Each side keeps its columns; the two crossing rows are joined by a new
    column placed at the cut, so ``n1 + n2 == n + 2``.
    """
    if cut.transposed:
        f1, f2 = factor_at(transpose_dual(D), cut._replace(transposed=False))
        return transpose_dual(f1), transpose_dual(f2)
    if len(cut.rows) != 2:
        raise NotApplicable(f"a composite cut is crossed by exactly two rows, not {len(cut.rows)}")
    inner, outer = _sides(D.n, cut.g1, cut.g2)
    in_set = set(inner)
    crossing = [r for r, (a, b) in enumerate(D.rows) if (a in in_set) != (b in in_set)]
    if tuple(crossing) != tuple(cut.rows):
        raise NotApplicable("cut rows do not match the diagram")
    joint = tuple(crossing)
    # Reading the cylinder as "outer then inner", the outer side ends at the
    # cut and the inner side starts there.
    return _restrict(D, outer, extra_right=joint), _restrict(D, inner, extra_left=joint)


# ------------------------------------------------------------- orbit search


class _Hit(NamedTuple):
    kind: str  # "destab" | "split" | "composite"
    key: bytes
    payload: object


_PRIORITY = {"destab": 0, "split": 1, "composite": 2}


def _probe(key: bytes, mode: str):
    if mode == "orbit":
        return None
    D = key_to_diagram(key)
    ds = destabilizations(D)
    if ds:
        return ("destab", ds[0])
    if mode == "decompose":
        cut = detect_split(D)
        if cut is not None:
            return ("split", cut)
        cut = detect_composite(D)
        if cut is not None:
            return ("composite", cut)
    return None


def _probe_chunk(args):
    keys, mode = args
    return [_probe(k, mode) for k in keys]


def _expand_chunk(keys):
    out = []
    for key in keys:
        D = key_to_diagram(key)
        nbrs = []
        for m in exchange_moves(D):
            k2, s, c = canonical_form(apply(D, m))
            nbrs.append((k2, m, s, c))
        out.append(nbrs)
    return out


@dataclass
class OrbitSnapshot:
    """Partial orbit at one complexity, enough to resume the search."""

    mode: str
    n: int
    input_key: bytes
    root: bytes
    prefix: list  # moves from the input to ``root``
    stats: list
    parents: dict  # key -> None | (parent, move, s, c)
    frontier: list

    def keys(self) -> list[CanonicalKey]:
        return sorted(CanonicalKey(k) for k in self.parents)


def write_snapshot(snap: OrbitSnapshot, path) -> None:
    meta = {
        "mode": snap.mode,
        "n": snap.n,
        "input": snap.input_key.hex(),
        "root": snap.root.hex(),
        "prefix": [m.to_dict() for m in snap.prefix],
        "stats": snap.stats,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(SNAPSHOT_HEADER + "\n")
        fh.write("meta " + json.dumps(meta, separators=(",", ":")) + "\n")
        for k in sorted(snap.parents):
            link = snap.parents[k]
            if link is None:
                fh.write(f"v {k.hex()} -\n")
            else:
                p, m, s, c = link
                mj = json.dumps(m.to_dict(), separators=(",", ":"))
                fh.write(f"v {k.hex()} {p.hex()} {mj} {s} {c}\n")
        for k in sorted(snap.frontier):
            fh.write(f"f {k.hex()}\n")


def read_snapshot(path) -> OrbitSnapshot:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != SNAPSHOT_HEADER:
        raise ValueError(f"not an orbit snapshot (expected header {SNAPSHOT_HEADER!r})")
    meta = None
    parents: dict = {}
    frontier = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        tag, _, rest = line.partition(" ")
        try:
            if tag == "meta":
                meta = json.loads(rest)
            elif tag == "v":
                parts = rest.split(" ")
                k = bytes.fromhex(parts[0])
                if parts[1] == "-":
                    parents[k] = None
                else:
                    parents[k] = (
                        bytes.fromhex(parts[1]),
                        move_from_dict(json.loads(parts[2])),
                        int(parts[3]),
                        int(parts[4]),
                    )
            elif tag == "f":
                frontier.append(bytes.fromhex(rest.strip()))
            else:
                raise ValueError(f"unknown record {tag!r}")
        except (ValueError, IndexError, KeyError) as exc:
            raise ValueError(f"snapshot line {ln}: {exc}") from None
    if meta is None:
        raise ValueError("snapshot has no meta record")
    return OrbitSnapshot(
        mode=meta["mode"],
        n=meta["n"],
        input_key=bytes.fromhex(meta["input"]),
        root=bytes.fromhex(meta["root"]),
        prefix=[move_from_dict(m) for m in meta["prefix"]],
        stats=meta["stats"],
        parents=parents,
        frontier=sorted(frontier),
    )


class _LevelResult(NamedTuple):
    hit: Optional[_Hit]
    parents: dict
    complete: bool
    reason: Optional[str]
    frontier: list


class _Engine:
    def __init__(self, cfg: SearchConfig, deadline: float, pool=None):
        self.cfg = cfg
        self.deadline = deadline
        self.pool = pool

    def _map(self, fn, chunks):
        if self.pool is not None and len(chunks) > 1:
            return self.pool.map(fn, chunks)
        return map(fn, chunks)

    def _out_of_time(self) -> bool:
        return time.monotonic() > self.deadline

    def level(self, root: bytes, mode: str, parents=None, frontier=None) -> _LevelResult:
        """Breadth-first search of the exchange orbit of ``root`` at one complexity."""
        if parents is None:
            parents = {root: None}
            frontier = [root]
        while frontier:
            if self._out_of_time():
                return _LevelResult(None, parents, False, "max_wall_millis", frontier)
            chunk = _CHUNK if self.pool is None or len(frontier) < _PARALLEL_MIN else max(
                _CHUNK, len(frontier) // (4 * self.cfg.parallelism))
            chunks = [frontier[i:i + chunk] for i in range(0, len(frontier), chunk)]
            if mode != "orbit":
                best = None
                for keys, probes in zip(chunks, self._map(_probe_chunk, [(c, mode) for c in chunks])):
                    for k, pr in zip(keys, probes):
                        if pr is not None and (best is None or _PRIORITY[pr[0]] < _PRIORITY[best.kind]):
                            best = _Hit(pr[0], k, pr[1])
                    if best is not None and best.kind == "destab":
                        break
                if best is not None:
                    return _LevelResult(best, parents, True, None, frontier)
            nxt = []
            done = 0
            for keys, results in zip(chunks, self._map(_expand_chunk, chunks)):
                for k, nbrs in zip(keys, results):
                    for k2, m, s, c in nbrs:
                        if k2 not in parents:
                            parents[k2] = (k, m, s, c)
                            nxt.append(k2)
                done += len(keys)
                reason = None
                if len(parents) > self.cfg.max_orbit_states:
                    reason = "max_orbit_states"
                elif self._out_of_time():
                    reason = "max_wall_millis"
                if reason:
                    return _LevelResult(None, parents, False, reason, sorted(frontier[done:] + nxt))
            frontier = sorted(nxt)
        return _LevelResult(None, parents, True, None, [])


def _path_moves(parents: dict, key: bytes) -> list[Move]:
    steps = []
    while parents[key] is not None:
        p, m, s, c = parents[key]
        steps.append([m] + cyclic_shift_moves(s, c))
        key = p
    out: list[Move] = []
    for s in reversed(steps):
        out.extend(s)
    return out


def _pool_for(cfg: SearchConfig):
    if cfg.parallelism > 1:
        return ProcessPoolExecutor(max_workers=cfg.parallelism)
    return None


@dataclass(frozen=True)
class OrbitResult:
    keys: frozenset
    complete: bool
    reason: Optional[str] = None

    def __len__(self):
        return len(self.keys)

    @staticmethod
    def representative(key: bytes) -> GridDiagram:
        return key_to_diagram(key)


def exchange_orbit(D: GridDiagram, cfg: SearchConfig | None = None) -> OrbitResult:
    """All combinatorial classes reachable from ``D`` by exchange moves."""
    cfg = cfg or SearchConfig()
    deadline = time.monotonic() + cfg.max_wall_millis / 1000
    pool = _pool_for(cfg)
    try:
        res = _Engine(cfg, deadline, pool).level(canonical_form(D)[0], "orbit")
    finally:
        if pool is not None:
            pool.shutdown()
    return OrbitResult(frozenset(CanonicalKey(k) for k in res.parents), res.complete, res.reason)


@dataclass
class SimplifyOutcome:
    tag: str  # "Trivial" | "Irreducible" | "Inconclusive"
    final_diagrams: tuple
    trace: MoveSequence
    orbit_stats: list
    reason: Optional[str] = None
    snapshot: Optional[OrbitSnapshot] = field(default=None, repr=False)
    elapsed_ms: Optional[float] = None
    cut: Optional[tuple] = field(default=None, repr=False)  # (kind, Cut) in decompose mode

    @property
    def final_n(self) -> int:
        return CanonicalKey(self.trace.final).n

    def to_dict(self, deterministic: bool = False, max_keys: int = 64) -> dict:
        keys = sorted(self.final_diagrams)
        d = {
            "outcome": self.tag,
            "final_n": self.final_n,
            "orbit_stats": self.orbit_stats,
            "final_orbit_size": len(keys),
            "final_keys": [k.hex() for k in keys[:max_keys]],
            "trace": self.trace.to_dict(),
        }
        if self.reason:
            d["reason"] = self.reason
        if not deterministic and self.elapsed_ms is not None:
            d["elapsed_ms"] = round(self.elapsed_ms, 1)
        return d


def _run(D: GridDiagram, cfg: SearchConfig, mode: str, deadline: float, resume: OrbitSnapshot | None = None):
    t0 = time.monotonic()
    pool = _pool_for(cfg)
    engine = _Engine(cfg, deadline, pool)
    input_key, s0, c0 = canonical_form(D)
    try:
        if resume is not None:
            if resume.input_key != input_key:
                raise ValueError("snapshot belongs to a different input diagram")
            if resume.mode != mode:
                raise ValueError(f"snapshot was taken in {resume.mode!r} mode, not {mode!r}")
            moves = list(resume.prefix)
            stats = [dict(s) for s in resume.stats]
            root = resume.root
            pending = (dict(resume.parents), list(resume.frontier))
        else:
            moves = cyclic_shift_moves(s0, c0)
            stats = []
            root = input_key
            pending = None
        while True:
            n = len(root) // 2
            if n == 2:
                stats.append({"n": 2, "states": 1})
                return _finish("Trivial", D, input_key, moves, root, [root], stats, t0)
            if pending is not None:
                res = engine.level(root, mode, *pending)
                pending = None
            else:
                res = engine.level(root, mode)
            stats.append({"n": n, "states": len(res.parents)})
            if not res.complete:
                snap = OrbitSnapshot(mode, n, input_key, root, list(moves), stats[:-1], res.parents, res.frontier)
                out = _finish("Inconclusive", D, input_key, moves, root, list(res.parents), stats, t0)
                out.reason, out.snapshot = res.reason, snap
                return out
            if res.hit is None:
                return _finish("Irreducible", D, input_key, moves, root, list(res.parents), stats, t0)
            hit = res.hit
            moves += _path_moves(res.parents, hit.key)
            if hit.kind != "destab":
                out = _finish("Irreducible", D, input_key, moves, hit.key, list(res.parents), stats, t0)
                out.tag = "Cut"
                out.cut = (hit.kind, hit.payload)
                return out
            rep = key_to_diagram(hit.key)
            smaller = apply(rep, hit.payload)
            k2, s, c = canonical_form(smaller)
            moves.append(hit.payload)
            moves += cyclic_shift_moves(s, c)
            root = k2
    finally:
        if pool is not None:
            pool.shutdown()


def _finish(tag, D, input_key, moves, final_key, keys, stats, t0):
    trace = MoveSequence(input_key, tuple(moves), final_key)
    return SimplifyOutcome(
        tag=tag,
        final_diagrams=tuple(sorted(CanonicalKey(k) for k in keys)),
        trace=trace,
        orbit_stats=stats,
        elapsed_ms=(time.monotonic() - t0) * 1000,
    )


def monotonic_simplify(
    D: GridDiagram, cfg: SearchConfig | None = None, resume: OrbitSnapshot | None = None
) -> SimplifyOutcome:
    """Alternate exhaustive exchange search with destabilization.

    At each complexity the exchange orbit is explored breadth first; at the
    first depth where some class admits a destabilization, the smallest such
    class (by key) is destabilized with its lowest-indexed block.

    Reaching size 2 gives ``Trivial``; exhausting an orbit gives
    ``Irreducible``.  Hitting a limit gives ``Inconclusive``, with the partial
    orbit kept in ``outcome.snapshot`` for a later ``resume``.
    """
    cfg = cfg or SearchConfig()
    deadline = time.monotonic() + cfg.max_wall_millis / 1000
    return _run(D, cfg, "simplify", deadline, resume)


# ----------------------------------------------------------- decomposition


@dataclass(frozen=True)
class Leaf:
    diagram: GridDiagram
    classification: str  # "TrivialUnknot" | "PrimeNontrivial" | "Unresolved"
    trace: Optional[MoveSequence] = None

    kind = "Leaf"

    def to_dict(self) -> dict:
        d = {"kind": "Leaf", "classification": self.classification, "n": self.diagram.n,
             "columns": [list(p) for p in self.diagram.columns]}
        if self.trace is not None:
            d["trace"] = self.trace.to_dict()
        return d


@dataclass(frozen=True)
class _Branch:
    diagram: GridDiagram  # the input at this node
    cut: Cut
    trace: MoveSequence  # from ``diagram`` to the class carrying ``cut``
    children: tuple

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.diagram.n,
            "cut": self.cut.to_dict(),
            "cut_key": bytes(self.trace.final).hex(),
            "trace": self.trace.to_dict(),
            "children": [c.to_dict() for c in self.children],
        }


@dataclass(frozen=True)
class DistantUnion(_Branch):
    kind = "DistantUnion"


@dataclass(frozen=True)
class ConnectedSum(_Branch):
    kind = "ConnectedSum"


DecompositionTree = Union[Leaf, DistantUnion, ConnectedSum]


def leaves(tree: DecompositionTree) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    return [lf for c in tree.children for lf in leaves(c)]


def _decompose(D: GridDiagram, cfg: SearchConfig, deadline: float) -> DecompositionTree:
    out = _run(D, cfg, "decompose", deadline)
    if out.tag == "Trivial":
        return Leaf(key_to_diagram(out.trace.final), "TrivialUnknot", out.trace)
    if out.tag == "Inconclusive":
        return Leaf(D, "Unresolved", out.trace)
    if out.tag == "Irreducible":
        return Leaf(key_to_diagram(out.trace.final), "PrimeNontrivial", out.trace)
    kind, cut = out.cut
    rep = key_to_diagram(out.trace.final)
    if kind == "split":
        parts = split_at(rep, cut)
        return DistantUnion(D, cut, out.trace, tuple(_decompose(p, cfg, deadline) for p in parts))
    parts = factor_at(rep, cut)
    kids = tuple(_decompose(p, cfg, deadline) for p in parts)
    keep = tuple(k for k in kids if not (isinstance(k, Leaf) and k.classification == "TrivialUnknot"))
    if len(keep) == 1:
        return keep[0]
    if not keep:
        return kids[0]
    return ConnectedSum(D, cut, out.trace, keep)


def decompose(D: GridDiagram, cfg: SearchConfig | None = None) -> DecompositionTree:
    """Split and factor ``D`` recursively into prime pieces.

    Each level runs the same search as :func:`monotonic_simplify`, but also
    stops at the first depth where a class admits a split or composite cut
    (destabilization first, then split, then composite; smallest key wins).
    Summands that turn out trivial are dropped from connected sums.
    """
    cfg = cfg or SearchConfig()
    deadline = time.monotonic() + cfg.max_wall_millis / 1000
    return _decompose(D, cfg, deadline)


# ------------------------------------------------------------ certificates


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    step: Optional[int] = None  # index of the first failing move; len(moves) for a key mismatch
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "step": self.step, "reason": self.reason}


def check_certificate(initial: GridDiagram, seq: MoveSequence) -> CertificateCheck:
    """Replay ``seq`` on ``initial`` move by move."""
    if canonical_key(initial) != bytes(seq.initial):
        return CertificateCheck(False, None, "initial diagram does not match the certificate")
    D = initial
    for i, m in enumerate(seq.moves):
        try:
            D = apply(D, m)
        except (NotApplicable, ValueError, IndexError) as exc:
            return CertificateCheck(False, i, f"move {i} ({m}) not applicable: {exc}")
    if canonical_key(D) != bytes(seq.final):
        return CertificateCheck(False, len(seq.moves), "final diagram does not match the certificate")
    return CertificateCheck(True)


# ------------------------------------------------------------------ census


def enumerate_diagrams(n: int) -> Iterable[GridDiagram]:
    """Every valid diagram of size ``n`` (0-1 matrices with all line sums 2)."""
    used = [0] * n
    cols: list[tuple[int, int]] = []

    def rec(c):
        if c == n:
            yield GridDiagram._trusted(tuple(cols))
            return
        # rows still needing endpoints must fit in the remaining columns
        if sum(2 - u for u in used) != 2 * (n - c):
            return
        for a in range(n):
            if used[a] == 2:
                continue
            for b in range(a + 1, n):
                if used[b] == 2:
                    continue
                used[a] += 1
                used[b] += 1
                cols.append((a, b))
                yield from rec(c + 1)
                cols.pop()
                used[a] -= 1
                used[b] -= 1

    yield from rec(0)


@dataclass
class CensusReport:
    n: int
    diagram_count: int
    class_count: int
    orbit_partition: list  # list of sorted key lists, ordered by first key
    rigid_class_count: int

    @property
    def bounds(self) -> tuple[float, int]:
        from math import factorial

        f = factorial(self.n - 1) ** 2
        return f / (2 * self.n), f

    def to_dict(self, with_partition: bool = False) -> dict:
        lo, hi = self.bounds
        d = {
            "n": self.n,
            "diagram_count": self.diagram_count,
            "class_count": self.class_count,
            "orbit_count": len(self.orbit_partition),
            "orbit_sizes": sorted((len(o) for o in self.orbit_partition), reverse=True),
            "rigid_class_count": self.rigid_class_count,
            "bounds": [lo, hi],
        }
        if with_partition:
            d["orbit_partition"] = [[k.hex() for k in o] for o in self.orbit_partition]
        return d


def census(n: int, cfg: SearchConfig | None = None, ceiling: int = 5) -> CensusReport:
    """Enumerate size-``n`` diagrams and group them into classes and exchange orbits."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > ceiling:
        raise LimitExceeded(f"census size {n} exceeds the ceiling {ceiling}")
    cfg = cfg or SearchConfig()
    deadline = time.monotonic() + cfg.max_wall_millis / 1000
    count = 0
    classes: set = set()
    for D in enumerate_diagrams(n):
        count += 1
        classes.add(canonical_form(D)[0])
        if count % 1024 == 0 and time.monotonic() > deadline:
            raise LimitExceeded("census ran past max_wall_millis")
    parent = {k: k for k in classes}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    rigid = 0
    for k in sorted(classes):
        rep = key_to_diagram(k)
        if is_rigid(rep):
            rigid += 1
        for m in exchange_moves(rep):
            a, b = find(k), find(canonical_form(apply(rep, m))[0])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for k in classes:
        groups.setdefault(find(k), []).append(CanonicalKey(k))
    partition = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    return CensusReport(n, count, len(classes), partition, rigid)
