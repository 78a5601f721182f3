from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridknot.convert import BraidWord, braid_to_grid, connected_sum, random_diagram, random_unknot, torus_grid
from gridknot.errors import LimitExceeded, NotApplicable
from gridknot.grid import GridDiagram, canonical_key, components, key_to_diagram, trivial_diagram
from gridknot.moves import Destab, MoveSequence, XchgCols, apply, exchange_moves, invert_sequence
from gridknot.simplify import (
    ConnectedSum,
    Cut,
    DistantUnion,
    Leaf,
    SearchConfig,
    census,
    check_certificate,
    decompose,
    detect_composite,
    detect_split,
    enumerate_diagrams,
    exchange_orbit,
    factor_at,
    leaves,
    monotonic_simplify,
    read_snapshot,
    split_at,
    write_snapshot,
)

from _support import diagrams, naive_key

UNLINK = GridDiagram.from_columns([[0, 1], [0, 1], [2, 3], [2, 3]])
TREFOIL = torus_grid(2, 3)
FIGURE_EIGHT = braid_to_grid(BraidWord.from_text("3: s1 s-2 s1 s-2"))


def replay_states(D, seq):
    out = [D]
    for m in seq.moves:
        out.append(apply(out[-1], m))
    return out


# ----------------------------------------------------------------- orbits


def test_orbit_of_trivial_and_trefoil():
    assert len(exchange_orbit(trivial_diagram())) == 1
    orb = exchange_orbit(TREFOIL)
    assert orb.complete and orb.keys == {canonical_key(TREFOIL)}


@given(diagrams(max_n=7))
def test_orbit_is_closed_under_exchanges(D):
    orb = exchange_orbit(D)
    assert orb.complete
    assert canonical_key(D) in orb.keys
    for k in orb.keys:
        rep = orb.representative(k)
        for m in exchange_moves(rep):
            assert canonical_key(apply(rep, m)) in orb.keys


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_orbit_sizes_within_bound(n):
    rep = census(n)
    assert all(len(o) <= factorial(n - 1) ** 2 for o in rep.orbit_partition)


def test_orbit_limit_flags_partial():
    D = random_diagram(8, 11)
    orb = exchange_orbit(D, SearchConfig(max_orbit_states=20))
    assert not orb.complete and orb.reason == "max_orbit_states"


def test_orbit_same_across_parallelism():
    D = random_diagram(8, 11)
    a = exchange_orbit(D, SearchConfig(parallelism=1))
    b = exchange_orbit(D, SearchConfig(parallelism=3))
    assert a.complete and a.keys == b.keys


# ----------------------------------------------------------- simplification


def test_trivial_is_trivial():
    out = monotonic_simplify(trivial_diagram())
    assert out.tag == "Trivial" and out.trace.moves == ()


def test_trefoil_irreducible():
    out = monotonic_simplify(TREFOIL)
    assert out.tag == "Irreducible" and out.final_n == 5


def test_figure_eight_irreducible_at_six():
    out = monotonic_simplify(FIGURE_EIGHT)
    assert out.tag == "Irreducible" and out.final_n == 6
    assert check_certificate(FIGURE_EIGHT, out.trace)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.integers(0, 10**6))
def test_scrambled_unknots_simplify(n, seed):
    D, scramble = random_unknot(n, seed)
    out = monotonic_simplify(D)
    assert out.tag == "Trivial"
    assert check_certificate(D, out.trace)
    states = replay_states(D, out.trace)
    assert states[-1] == trivial_diagram()
    # monotonicity: size drops exactly at destabilizations
    for before, m, after in zip(states, out.trace.moves, states[1:]):
        assert after.n == before.n - isinstance(m, Destab)
        assert len(components(after)) == 1
    # the inverted scramble is itself a certificate
    end, undo = invert_sequence(trivial_diagram(), scramble.moves)
    assert end == D
    assert check_certificate(D, MoveSequence.build(D, undo))


@settings(max_examples=40, deadline=None)
@given(diagrams(max_n=7))
def test_outcome_is_consistent(D):
    out = monotonic_simplify(D, SearchConfig(max_orbit_states=50_000))
    assert check_certificate(D, out.trace)
    final = key_to_diagram(out.trace.final)
    assert len(components(final)) == len(components(D))
    if out.tag == "Trivial":
        assert final.n == 2
    elif out.tag == "Irreducible":
        assert out.trace.final in out.final_diagrams
        for k in out.final_diagrams:
            assert key_to_diagram(k).n == out.final_n
        assert set(out.final_diagrams) == exchange_orbit(final).keys


def test_inconclusive_and_resume(tmp_path):
    D = random_diagram(8, 11)
    full = monotonic_simplify(D)
    part = monotonic_simplify(D, SearchConfig(max_orbit_states=60))
    assert part.tag == "Inconclusive" and part.reason == "max_orbit_states"
    path = tmp_path / "orbit.snap"
    write_snapshot(part.snapshot, path)
    assert path.read_text().splitlines()[0] == "GRIDKNOT-ORBIT v1"
    snap = read_snapshot(path)
    assert snap.keys() == part.snapshot.keys()
    again = monotonic_simplify(D, resume=snap)
    assert again.tag == full.tag
    assert set(again.final_diagrams) == set(full.final_diagrams)
    assert check_certificate(D, again.trace)


def test_resume_rejects_foreign_snapshot(tmp_path):
    part = monotonic_simplify(random_diagram(8, 11), SearchConfig(max_orbit_states=60))
    with pytest.raises(ValueError):
        monotonic_simplify(TREFOIL, resume=part.snapshot)
    bad = tmp_path / "bad.snap"
    bad.write_text("not a snapshot\n")
    with pytest.raises(ValueError):
        read_snapshot(bad)


def test_wall_clock_limit():
    D = random_diagram(9, 3)
    out = monotonic_simplify(D, SearchConfig(max_wall_millis=1))
    assert out.tag in ("Inconclusive", "Trivial", "Irreducible")
    if out.tag == "Inconclusive":
        assert out.reason == "max_wall_millis"


def test_determinism_across_parallelism():
    D = random_diagram(8, 11)
    a = monotonic_simplify(D, SearchConfig(parallelism=1))
    b = monotonic_simplify(D, SearchConfig(parallelism=4))
    assert a.to_dict(deterministic=True) == b.to_dict(deterministic=True)


# ------------------------------------------------------------------- cuts


def test_split_examples():
    assert detect_split(UNLINK) == Cut(1, 3)
    assert detect_split(trivial_diagram()) is None
    assert detect_split(TREFOIL) is None
    a, b = split_at(UNLINK, Cut(1, 3))
    assert a == b == trivial_diagram()


def test_composite_examples():
    assert detect_composite(trivial_diagram()) is None
    assert detect_composite(TREFOIL) is None
    S = connected_sum(TREFOIL, TREFOIL)
    cut = detect_composite(S)
    assert cut is not None and len(cut.rows) == 2
    f1, f2 = factor_at(S, cut)
    assert f1.n + f2.n == S.n + 2
    assert canonical_key(TREFOIL) in exchange_orbit(f1).keys
    assert canonical_key(TREFOIL) in exchange_orbit(f2).keys


def test_factor_rejects_split_cut():
    with pytest.raises(NotApplicable):
        factor_at(UNLINK, Cut(1, 3))


def test_composite_on_transpose():
    S = connected_sum(TREFOIL, TREFOIL)
    from gridknot.grid import transpose_dual

    T = transpose_dual(S)
    cut = detect_composite(T)
    assert cut is not None
    f1, f2 = factor_at(T, cut)
    assert f1.n + f2.n == T.n + 2


@given(diagrams(min_n=4, max_n=10))
def test_factor_sizes_and_components(D):
    cut = detect_composite(D)
    if cut is None:
        return
    f1, f2 = factor_at(D, cut)
    assert f1.n + f2.n == D.n + 2
    assert min(f1.n, f2.n) >= 2
    assert len(components(f1)) + len(components(f2)) == len(components(D)) + 1


@given(diagrams(min_n=4, max_n=10))
def test_split_sizes_and_components(D):
    cut = detect_split(D)
    if cut is None:
        return
    a, b = split_at(D, cut)
    assert a.n + b.n == D.n
    assert len(components(a)) + len(components(b)) == len(components(D))


# ---------------------------------------------------------- decomposition


def test_decompose_trivial():
    tree = decompose(trivial_diagram())
    assert isinstance(tree, Leaf) and tree.classification == "TrivialUnknot"


def test_decompose_unlink():
    tree = decompose(UNLINK)
    assert isinstance(tree, DistantUnion)
    assert [lf.classification for lf in tree.children] == ["TrivialUnknot", "TrivialUnknot"]


def test_decompose_granny():
    tree = decompose(connected_sum(TREFOIL, TREFOIL))
    assert isinstance(tree, ConnectedSum)
    assert [lf.classification for lf in leaves(tree)] == ["PrimeNontrivial"] * 2
    for lf in leaves(tree):
        assert canonical_key(TREFOIL) in exchange_orbit(lf.diagram).keys
    d = tree.to_dict()
    assert d["kind"] == "ConnectedSum" and len(d["children"]) == 2


def test_decompose_drops_trivial_summands():
    # A stabilized trefoil summed with a stabilized unknot is still a trefoil.
    from gridknot.moves import Stab

    U = apply(trivial_diagram(), Stab(0, 0, "NE"))
    v = U.vertices()[-1]
    U = apply(U, Stab(v.col, v.row, "SW"))
    assert U.n == 4
    tree = decompose(connected_sum(TREFOIL, U))
    assert [lf.classification for lf in leaves(tree)] == ["PrimeNontrivial"]


def test_decompose_unresolved_on_limits():
    D = random_diagram(8, 30)
    # Unbounded, the search visits 34 classes at n = 7.
    assert max(s["states"] for s in monotonic_simplify(D).orbit_stats) > 3
    tree = decompose(D, SearchConfig(max_orbit_states=3))
    assert any(lf.classification == "Unresolved" for lf in leaves(tree))


def test_decompose_distant_union_of_trefoils():
    from gridknot.convert import distant_union

    tree = decompose(distant_union(TREFOIL, TREFOIL))
    assert isinstance(tree, DistantUnion)
    assert [lf.classification for lf in leaves(tree)] == ["PrimeNontrivial"] * 2


# ------------------------------------------------------------ certificates


def test_certificate_checks():
    D, _ = random_unknot(7, 5)
    out = monotonic_simplify(D)
    assert check_certificate(D, out.trace)
    empty = MoveSequence(canonical_key(D), (), canonical_key(D))
    assert check_certificate(D, empty)
    assert not check_certificate(trivial_diagram(), out.trace)


def test_tampered_certificate_reports_step():
    D, _ = random_unknot(7, 5)
    out = monotonic_simplify(D)
    moves = list(out.trace.moves)
    k = next(i for i, m in enumerate(moves) if isinstance(m, Destab))
    moves[k] = Destab(moves[k].i, (moves[k].j + 1) % D.n)
    res = check_certificate(D, MoveSequence(out.trace.initial, tuple(moves), out.trace.final))
    assert not res
    assert res.step is not None and res.step <= len(moves)


def test_bad_final_key_is_rejected():
    D = TREFOIL
    seq = MoveSequence(canonical_key(D), (), canonical_key(trivial_diagram()))
    res = check_certificate(D, seq)
    assert not res and res.step == 0


def test_inapplicable_move_is_located():
    seq = MoveSequence(canonical_key(TREFOIL), (XchgCols(0),), canonical_key(TREFOIL))
    res = check_certificate(TREFOIL, seq)
    assert not res and res.step == 0


# ------------------------------------------------------------------ census


@pytest.mark.parametrize("n, count", [(2, 1), (3, 6), (4, 90), (5, 2040)])
def test_diagram_counts(n, count):
    # OEIS A001499: n x n 0-1 matrices with two 1s in every row and column.
    assert sum(1 for _ in enumerate_diagrams(n)) == count


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_class_count_matches_brute_force(n):
    rep = census(n)
    assert rep.class_count == len({naive_key(D) for D in enumerate_diagrams(n)})
    assert sum(len(o) for o in rep.orbit_partition) == rep.class_count


@pytest.mark.parametrize("n", [3, 4, 5])
def test_census_bounds(n):
    rep = census(n)
    lo, hi = rep.bounds
    assert lo < rep.class_count <= hi


def test_census_orbits_are_exchange_orbits():
    rep = census(5)
    for orbit in rep.orbit_partition:
        assert exchange_orbit(orbit[0].diagram()).keys == set(orbit)


def test_census_ceiling():
    with pytest.raises(LimitExceeded):
        census(6)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_small_knots_are_unknots(n):
    for orbit in census(n).orbit_partition:
        D = orbit[0].diagram()
        out = monotonic_simplify(D)
        if len(components(D)) == 1:
            assert out.tag == "Trivial"
        else:
            assert out.tag == "Irreducible"


@pytest.mark.parametrize("seed", range(8))
def test_long_scrambles(seed):
    D, _ = random_unknot(9 + seed % 4, seed, min_moves=400)
    out = monotonic_simplify(D)
    assert out.tag == "Trivial" and check_certificate(D, out.trace)
