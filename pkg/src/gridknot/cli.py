"""``gridknot`` command-line interface.

Exit codes: 0 success (``recognize``: unknot), 2 bad input, 3 irreducible /
knotted (or a rejected certificate), 4 inconclusive because a search limit
was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .convert import BraidWord, braid_to_grid, grid_to_braid, random_diagram, random_unknot, torus_grid
from .errors import GridError, LimitExceeded
from .grid import (
    GridDiagram,
    all_orientations,
    canonical_key,
    components,
    default_orientation,
    dumps,
    key_to_diagram,
    loads,
    render_ascii,
)
from .invariants import crossing_bound, crossings, is_rigid, writhe_report, writhe_test
from .moves import MoveSequence
from .simplify import (
    Leaf,
    SearchConfig,
    census,
    check_certificate,
    decompose,
    leaves,
    monotonic_simplify,
    read_snapshot,
    write_snapshot,
)

EXIT_OK, EXIT_INPUT, EXIT_KNOTTED, EXIT_INCONCLUSIVE = 0, 2, 3, 4

_RECOGNIZE = {"Trivial": ("unknot", EXIT_OK), "Irreducible": ("irreducible", EXIT_KNOTTED),
              "Inconclusive": ("inconclusive", EXIT_INCONCLUSIVE)}


class InputError(Exception):
    pass


def _fmt_for(path: str, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "text" if Path(path).suffix in (".txt", ".grid") else "json"


def _read_input(args) -> str:
    if not args.input:
        raise InputError("--in is required for this command")
    if args.input == "-":
        return sys.stdin.read()
    try:
        return Path(args.input).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None


def _diagram(args) -> GridDiagram:
    text = _read_input(args)
    return loads(text, _fmt_for(args.input, args.format))


def _write_diagram(args, D: GridDiagram) -> None:
    if args.out:
        Path(args.out).write_text(dumps(D, _fmt_for(args.out, args.format)))


def _write_cert(args, seq: MoveSequence) -> None:
    if args.cert_out:
        Path(args.cert_out).write_text(json.dumps(seq.to_dict(), indent=1, sort_keys=True) + "\n")


def _config(args) -> SearchConfig:
    return SearchConfig.from_env(
        max_orbit_states=args.max_orbit,
        max_wall_millis=args.max_millis,
        parallelism=args.jobs,
        deterministic=args.deterministic,
    )


def _orientations(args, D):
    return all_orientations(D) if args.orientation == "all" else [default_orientation(D)]


def _diagram_payload(D: GridDiagram) -> dict:
    return {"n": D.n, "columns": [list(p) for p in D.columns], "key": canonical_key(D).hex()}


# ------------------------------------------------------------------ commands


def cmd_validate(args):
    D = _diagram(args)
    payload = _diagram_payload(D)
    payload.update(valid=True, components=len(components(D)))
    return payload, EXIT_OK, lambda: render_ascii(D)


def cmd_render(args):
    D = _diagram(args)
    art = render_ascii(D)
    return {"n": D.n, "ascii": art.splitlines()}, EXIT_OK, lambda: art


def cmd_invariants(args):
    D = _diagram(args)
    reports = [writhe_report(D, o) for o in _orientations(args, D)]
    payload = reports[0].to_dict()
    payload.update(
        n=D.n,
        components=len(components(D)),
        crossings=len(crossings(D)),
        crossing_bound=crossing_bound(D.n),
        rigid=is_rigid(D),
    )
    if args.orientation == "all":
        payload["reports"] = [r.to_dict() for r in reports]

    def human():
        lines = [f"n = {D.n}, components = {payload['components']}, crossings = {payload['crossings']}"]
        lines += [f"orientation {list(r.orientation)}: w = {r.w}, (w-, w+) = ({r.w_minus}, {r.w_plus})"
                  for r in reports]
        return "\n".join(lines)

    return payload, EXIT_OK, human


def cmd_writhe_test(args):
    D = _diagram(args)
    v = writhe_test(D, all_orientations_=args.orientation != "default")
    return v.to_dict(), EXIT_OK, lambda: v.status + (f": {v.witness['violated']}" if v.witness else "")


def cmd_rigid(args):
    D = _diagram(args)
    r = is_rigid(D)
    return {"rigid": r, "n": D.n}, EXIT_OK, lambda: "rigid" if r else "not rigid"


def _outcome_payload(args, out):
    payload = out.to_dict(deterministic=args.deterministic)
    _write_cert(args, out.trace)
    if out.snapshot is not None and args.snapshot_out:
        write_snapshot(out.snapshot, args.snapshot_out)
    return payload


def _resume(args):
    if not getattr(args, "resume", None):
        return None
    try:
        return read_snapshot(args.resume)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load snapshot: {exc}") from None


def cmd_recognize(args):
    D = _diagram(args)
    out = monotonic_simplify(D, _config(args), resume=_resume(args))
    word, code = _RECOGNIZE[out.tag]
    payload = _outcome_payload(args, out)
    payload["outcome"] = word
    return payload, code, lambda: f"{word} (final n = {out.final_n})"


def cmd_simplify(args):
    D = _diagram(args)
    out = monotonic_simplify(D, _config(args), resume=_resume(args))
    payload = _outcome_payload(args, out)
    final = key_to_diagram(out.trace.final)
    payload["final"] = _diagram_payload(final)
    _write_diagram(args, final)
    code = EXIT_INCONCLUSIVE if out.tag == "Inconclusive" else EXIT_OK
    return payload, code, lambda: f"{out.tag} at n = {out.final_n}\n{render_ascii(final)}"


def _tree_text(node, indent=0) -> list[str]:
    pad = "  " * indent
    if isinstance(node, Leaf):
        return [f"{pad}{node.classification} (n = {node.diagram.n})"]
    lines = [f"{pad}{node.kind} (n = {node.diagram.n})"]
    for c in node.children:
        lines += _tree_text(c, indent + 1)
    return lines


def cmd_decompose(args):
    D = _diagram(args)
    tree = decompose(D, _config(args))
    unresolved = any(lf.classification == "Unresolved" for lf in leaves(tree))
    code = EXIT_INCONCLUSIVE if unresolved else EXIT_OK
    return {"tree": tree.to_dict()}, code, lambda: "\n".join(_tree_text(tree))


def cmd_to_braid(args):
    D = _diagram(args)
    # Reversing every component changes the braid, so "all" means all 2**k here.
    orients = all_orientations(D, fix_first=False) if args.orientation == "all" else [default_orientation(D)]
    braids = [(o, grid_to_braid(D, o)) for o in orients]
    items = [{"orientation": list(o), "braid": b.to_text(), **b.to_dict()} for o, b in braids]
    payload = dict(items[0])
    if args.orientation == "all":
        payload["all"] = items
    return payload, EXIT_OK, lambda: "\n".join(b.to_text() for _, b in braids)


def cmd_from_braid(args):
    text = _read_input(args)
    if text.lstrip().startswith("{"):
        try:
            b = BraidWord.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    else:
        b = BraidWord.from_text(text)
    D = braid_to_grid(b)
    _write_diagram(args, D)
    payload = _diagram_payload(D)
    payload["braid"] = b.to_text()
    return payload, EXIT_OK, lambda: render_ascii(D)


def cmd_torus(args):
    D = torus_grid(args.p, args.q)
    _write_diagram(args, D)
    return _diagram_payload(D), EXIT_OK, lambda: render_ascii(D)


def cmd_random(args):
    D = random_diagram(args.n, args.seed)
    _write_diagram(args, D)
    return _diagram_payload(D), EXIT_OK, lambda: render_ascii(D)


def cmd_scramble(args):
    D, seq = random_unknot(args.n, args.seed, args.moves)
    _write_diagram(args, D)
    _write_cert(args, seq)
    payload = _diagram_payload(D)
    payload["scramble"] = seq.to_dict()
    return payload, EXIT_OK, lambda: render_ascii(D)


def cmd_census(args):
    rep = census(args.n, _config(args), ceiling=args.ceiling)
    payload = rep.to_dict(with_partition=args.partition)
    return payload, EXIT_OK, lambda: (
        f"n = {rep.n}: {rep.diagram_count} diagrams, N(n) = {rep.class_count}, "
        f"{len(rep.orbit_partition)} exchange orbits, {rep.rigid_class_count} rigid classes"
    )


def cmd_check_cert(args):
    D = _diagram(args)
    if not args.cert:
        raise InputError("--cert is required")
    try:
        seq = MoveSequence.from_dict(json.loads(Path(args.cert).read_text()))
    except OSError as exc:
        raise InputError(f"cannot read {args.cert}: {exc.strerror}") from None
    except (json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    res = check_certificate(D, seq)
    return res.to_dict(), EXIT_OK if res else EXIT_KNOTTED, lambda: "accepted" if res else f"rejected: {res.reason}"


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH", help="input file ('-' for stdin)")
    common.add_argument("--format", choices=["json", "text"], help="diagram file format (default: by suffix)")
    common.add_argument("--out", metavar="PATH", help="write the resulting diagram here")
    common.add_argument("--cert-out", metavar="PATH", help="write the move-sequence certificate here")
    common.add_argument("--orientation", choices=["default", "all"], default="default")
    common.add_argument("--max-orbit", type=int, metavar="N", help="orbit state limit per complexity")
    common.add_argument("--max-millis", type=int, metavar="MS", help="wall-clock limit")
    common.add_argument("--jobs", type=int, default=1, help="search worker processes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--deterministic", action="store_true", help="omit timings from the output")
    common.add_argument("--human", action="store_true", help="print text instead of JSON")

    parser = argparse.ArgumentParser(prog="gridknot", description="Grid diagram toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    add("validate", cmd_validate, "check a diagram file")
    add("render", cmd_render, "draw a diagram as ASCII art")
    add("invariants", cmd_invariants, "writhe pair and related counts")
    add("writhe-test", cmd_writhe_test, "writhe-bound knottedness certificate")
    add("rigid", cmd_rigid, "rigidity check")
    for name, fn, h in (("recognize", cmd_recognize, "decide whether a diagram is the unknot"),
                        ("simplify", cmd_simplify, "monotonic simplification")):
        p = add(name, fn, h)
        p.add_argument("--snapshot-out", metavar="PATH", help="save the partial orbit when a limit is hit")
        p.add_argument("--resume", metavar="PATH", help="continue from a saved orbit snapshot")
    add("decompose", cmd_decompose, "split and factor into prime pieces")
    add("to-braid", cmd_to_braid, "read a braid from a diagram")
    add("from-braid", cmd_from_braid, 'build a diagram from a braid ("m: s1 s-2" or JSON)')
    p = add("torus", cmd_torus, "torus link diagram")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p = add("random", cmd_random, "uniformly random diagram")
    p.add_argument("n", type=int)
    p = add("scramble", cmd_scramble, "scrambled unknot with its scrambling certificate")
    p.add_argument("n", type=int)
    p.add_argument("--moves", type=int, default=20, help="minimum number of scramble moves")
    p = add("census", cmd_census, "enumerate all diagrams of one size")
    p.add_argument("n", type=int)
    p.add_argument("--ceiling", type=int, default=5, help="largest size accepted")
    p.add_argument("--partition", action="store_true", help="include every orbit's keys")
    p = add("check-cert", cmd_check_cert, "replay a certificate")
    p.add_argument("--cert", metavar="PATH", help="certificate JSON")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the usage message
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        payload, code, human = args.func(args)
    except (InputError, GridError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    except LimitExceeded as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except OSError as exc:
        print(json.dumps({"error": f"{exc.filename}: {exc.strerror}"}), file=sys.stderr)
        return EXIT_INPUT
    if args.human:
        print(human())
    else:
        payload = {"command": args.command, **payload}
        print(json.dumps(payload, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
