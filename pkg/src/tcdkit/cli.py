"""Command-line front end: ``tcdkit <subcommand> ...``.

Exit codes: 0 success or SAT, 1 UNSAT / No / invalid, 2 ExceedsK or TooWide,
64 usage error, 65 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .approx import ExceedsK, approx_ecrw
from .coloring import ColoringError, list_coloring, solve_precoloring
from .decomp import TreeCutDecomposition, metrics, validate_tcd
from .families import FAMILIES, FamilySpec, gen_family
from .graph import GraphParseError, format_edge_list, parse_graph
from .oracle import exact_aux, exact_ecrw_alpha
from .treedec import TooWide, build_tree_decomposition, make_nice

EXIT_OK, EXIT_NO, EXIT_EXCEEDS, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def threads() -> int:
    """Parallelism cap from TCDKIT_THREADS (default 1); all work here runs sequentially."""
    raw = os.environ.get("TCDKIT_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"TCDKIT_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise UsageError(f"TCDKIT_THREADS must be a positive integer, got {raw!r}")
    return value


def gen_comments(spec: FamilySpec, roles: dict) -> list[str]:
    lines = [f"family {spec.describe()}"]
    lines += [f"role {name} {v}" for name, v in sorted(roles.items(), key=lambda x: (x[1], x[0]))]
    return lines


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str):
    try:
        return parse_graph(_read(path))
    except GraphParseError as exc:
        raise DataError(f"{path}: {exc}") from None


def _json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _decomposition(path: str) -> TreeCutDecomposition:
    data = _json(path)
    try:
        return TreeCutDecomposition.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: not a decomposition ({exc})") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _positive(name):
    def parse(raw):
        try:
            value = int(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be at least 1")
        return value
    return parse


def parse_lists(text: str) -> dict[int, tuple]:
    """Lines ``v: c1 c2 ...``; '#' starts a comment."""
    lists: dict[int, tuple] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise DataError(f"line {lineno}: expected 'v: c1 c2 ...'")
        try:
            v = int(head)
            colors = tuple(int(c) for c in rest.split())
        except ValueError:
            raise DataError(f"line {lineno}: non-integer entry") from None
        if v in lists:
            raise DataError(f"line {lineno}: vertex {v} listed twice")
        lists[v] = colors
    return lists


def parse_precoloring(text: str) -> tuple[int, dict[int, int]]:
    """A ``q <int>`` header followed by ``v c`` lines."""
    q = None
    colors: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        try:
            if parts[0] == "q" and len(parts) == 2:
                if q is not None:
                    raise DataError(f"line {lineno}: repeated q header")
                q = int(parts[1])
                continue
            if len(parts) != 2:
                raise DataError(f"line {lineno}: expected 'v c'")
            v, c = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"line {lineno}: non-integer entry") from None
        if v in colors:
            raise DataError(f"line {lineno}: vertex {v} precolored twice")
        colors[v] = c
    if q is None:
        raise DataError("missing 'q <int>' header")
    return q, colors


def _coloring_output(colors, as_json: bool) -> str:
    if as_json:
        payload = {"sat": colors is not None}
        if colors is not None:
            payload["coloring"] = {str(v): colors[v] for v in sorted(colors)}
        return json.dumps(payload, sort_keys=True) + "\n"
    if colors is None:
        return "UNSAT\n"
    return "SAT\n" + "".join(f"{v} {colors[v]}\n" for v in sorted(colors))


# -- subcommands --------------------------------------------------------------


def cmd_gen(args) -> int:
    params = {p: getattr(args, p) for p in FAMILIES[args.family] if getattr(args, p) is not None}
    try:
        spec = FamilySpec(args.family, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    G, roles = gen_family(spec)
    _emit(format_edge_list(G, gen_comments(spec, roles)), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    G = _graph(args.graph)
    D = _decomposition(args.decomp)
    report = validate_tcd(G, D)
    if not report.ok:
        if args.json:
            print(json.dumps(report.as_dict(), sort_keys=True))
        else:
            for v in report.violations:
                print(f"violation {v.kind} {json.dumps(v.detail, sort_keys=True)}")
        return EXIT_NO
    m = metrics(G, D)
    ok = True
    bound = None
    if args.alpha is not None and m.thickness > args.alpha:
        ok = False
    if args.alpha is not None and args.k is not None:
        bound = 2 * args.alpha ** 2 + 5 * args.k
        ok = ok and m.crossing <= bound
    if args.json:
        print(json.dumps({"ok": ok, "thickness": m.thickness, "crossing": m.crossing,
                          "ecrw": m.ecrw, "crossing_bound": bound}, sort_keys=True))
    else:
        print(f"{'ok' if ok else 'bound_violated'} thickness={m.thickness} crossing={m.crossing} ecrw={m.ecrw}")
    return EXIT_OK if ok else EXIT_NO


def cmd_treedec(args) -> int:
    G = _graph(args.graph)
    td = build_tree_decomposition(G, args.w)
    if isinstance(td, TooWide):
        print(f"TREEWIDTH_EXCEEDS {args.w}")
        return EXIT_EXCEEDS
    if args.nice:
        td = make_nice(G, td)
    _emit(json.dumps(td.to_json(), sort_keys=True) + "\n", args.output)
    if args.output:
        print(json.dumps({"width": td.width}) if args.json else f"width={td.width}")
    return EXIT_OK


def cmd_approx(args) -> int:
    G = _graph(args.graph)
    out = approx_ecrw(G, args.alpha, args.k)
    if isinstance(out, ExceedsK):
        print(f"ECRW_ALPHA_EXCEEDS {args.k}")
        return EXIT_EXCEEDS
    bound = 2 * args.alpha ** 2 + 5 * args.k
    m = metrics(G, out)
    _emit(out.dumps() + "\n", args.output)
    if args.json:
        print(json.dumps({"thickness": m.thickness, "crossing": m.crossing,
                          "crossing_bound": bound}, sort_keys=True))
    else:
        print(f"thickness={m.thickness} crossing<={bound}")
    return EXIT_OK


def cmd_exact(args) -> int:
    G = _graph(args.graph)
    try:
        if args.param == "ecrw_alpha":
            if args.alpha is None:
                raise UsageError("--alpha is required for ecrw_alpha")
            res = exact_ecrw_alpha(G, args.alpha)
        else:
            res = exact_aux(G, args.param)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    w = res.witness
    if hasattr(w, "to_json"):
        witness = w.to_json()
    else:
        witness = {"forest": [list(e) for e in w.forest]}
    if args.output:
        _emit(json.dumps(witness, sort_keys=True) + "\n", args.output)
    if args.json:
        print(json.dumps({"param": res.param, "value": res.value, "alpha": res.alpha}, sort_keys=True))
    else:
        print(f"{res.param}={res.value}")
    return EXIT_OK


def cmd_color(args) -> int:
    G = _graph(args.graph)
    lists = parse_lists(_read(args.lists))
    missing = [v for v in range(G.n) if v not in lists]
    extra = [v for v in lists if not 0 <= v < G.n]
    if missing or extra:
        raise DataError(f"lists must cover exactly the vertices 0..{G.n - 1}")
    D = None
    if args.decomp:
        D = _decomposition(args.decomp)
        report = validate_tcd(G, D)
        if not report.ok:
            raise DataError(f"decomposition is invalid: {sorted(report.kinds())}")
    colors = list_coloring(G, lists, args.alpha, D)
    _emit(_coloring_output(colors, args.json), args.output)
    return EXIT_OK if colors is not None else EXIT_NO


def cmd_precolor(args) -> int:
    G = _graph(args.graph)
    q, cS = parse_precoloring(_read(args.precoloring))
    try:
        colors = solve_precoloring(G, set(cS), q, cS, args.alpha)
    except ColoringError as exc:
        raise DataError(str(exc)) from None
    _emit(_coloring_output(colors, args.json), args.output)
    return EXIT_OK if colors is not None else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tcdkit", description="Tree-cut decompositions, edge-crossing width and list coloring.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, output=True):
        p.add_argument("--json", action="store_true", help="machine-readable summary")
        if output:
            p.add_argument("-o", "--output", help="write the main result here instead of stdout")

    p = sub.add_parser("gen", help="generate a family member as an edge list")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--n", type=_positive("--n"), help="size parameter n")
    p.add_argument("--k", type=_positive("--k"), help="multiplicity parameter k (S and Gnk)")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="validate a tree-cut decomposition and print its metrics")
    p.add_argument("graph")
    p.add_argument("decomp")
    p.add_argument("--alpha", type=_positive("--alpha"), help="thickness bound to check")
    p.add_argument("--k", type=_positive("--k"), help="with --alpha, check crossing <= 2 alpha^2 + 5k")
    common(p, output=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("treedec", help="tree-decomposition of width <= 2w+1, or report tw > w")
    p.add_argument("graph")
    p.add_argument("--w", type=_positive("--w"), required=True, help="width budget")
    p.add_argument("--nice", action="store_true", help="convert to a nice tree-decomposition")
    common(p)
    p.set_defaults(func=cmd_treedec)

    p = sub.add_parser("approx", help="approximate alpha-edge-crossing width")
    p.add_argument("graph")
    p.add_argument("--alpha", type=_positive("--alpha"), required=True, help="thickness budget")
    p.add_argument("--k", type=_positive("--k"), required=True, help="crossing parameter")
    common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("exact", help="exact width parameter of a small graph")
    p.add_argument("graph")
    p.add_argument("--param", required=True, choices=["ecrw_alpha", "ecrw", "tpw", "tw", "ecw"])
    p.add_argument("--alpha", type=_positive("--alpha"), help="thickness for ecrw_alpha")
    common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("color", help="list coloring")
    p.add_argument("graph")
    p.add_argument("lists", help="file of 'v: c1 c2 ...' lines")
    p.add_argument("--decomp", help="tree-cut decomposition JSON to use instead of computing one")
    p.add_argument("--alpha", type=_positive("--alpha"), default=1, help="thickness used when decomposing (default 1)")
    common(p)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("precolor", help="precoloring extension")
    p.add_argument("graph")
    p.add_argument("precoloring", help="file with a 'q <int>' header and 'v c' lines")
    p.add_argument("--alpha", type=_positive("--alpha"), default=1, help="thickness used when decomposing (default 1)")
    common(p)
    p.set_defaults(func=cmd_precolor)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads()
        return args.func(args)
    except UsageError as exc:
        print(f"tcdkit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"tcdkit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
