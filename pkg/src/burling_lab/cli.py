"""Command-line front end.

Every command prints one JSON document on stdout.  Exit codes:

    0   member / suite passed / query answered
    1   non-member / suite failed
    2   unknown (budgets exhausted)
    3   usage error
    4   I/O error
    5   requested size above the enumeration cap
    64  input could not be parsed
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence, TextIO

from . import __version__
from .certificates import MEMBER, NON_MEMBER, Budgets, Verdict
from .families import (
    NOT_IN_FAMILY,
    classify_k4_subdivision,
    classify_k5_subdivision,
    decide_dumbbell,
    decide_k5,
    decide_necklace,
    parse_dumbbell,
    parse_necklace,
)
from .graph import Graph, GraphParseError, ResourceError, from_graph6, parse_graph, to_graph6
from .recognizer import decide_batch, verify_verdict
from .sweeps import SUITES
from .tree import DEFAULT_MAX_NODES, BurlingTree, DerivationWitness, enumerate_trees, fully_derive, validate_tree, verify_witness

EXIT_OK, EXIT_NON_MEMBER, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_IO, EXIT_CAP, EXIT_PARSE = 3, 4, 5, 64

FORMATS = ("edge-list", "graph6", "json")
FAMILIES = ("k4", "k5", "necklace", "dumbbell")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2, which is taken by "unknown"
    def error(self, message: str):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _nonnegative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-tree-nodes", type=_positive, default=9)
    common.add_argument("--max-orient-edges", type=_positive, default=28)
    common.add_argument("--seed", type=_nonnegative, default=0)
    common.add_argument("--out", metavar="PATH")

    graph_in = _Parser(add_help=False)
    graph_in.add_argument("graph_file", metavar="GRAPH", help='input file, or "-" for stdin')
    graph_in.add_argument("--format", choices=FORMATS, default="edge-list")

    p = _Parser(prog="burling-lab", description="Burling graph recognition with certificates.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[common], help="enumerate Burling trees or their fully derived graphs")
    gen.add_argument("--max-nodes", type=_positive, required=True)
    gen.add_argument("--emit", choices=("trees", "derived"), default="trees")

    sub.add_parser("check", parents=[common, graph_in], help="decide membership and print the certificate")

    cl = sub.add_parser("classify", parents=[common, graph_in], help="classify against one of the characterized families")
    cl.add_argument("--family", choices=FAMILIES, required=True)

    ver = sub.add_parser("verify", parents=[common], help="run a property sweep, or replay a certificate")
    ver.add_argument("suite", nargs="?", choices=tuple(SUITES))
    ver.add_argument("--certificate", metavar="PATH", help="verdict, witness or tree JSON to replay")
    ver.add_argument("--graph", metavar="PATH", help="graph the certificate is about")
    ver.add_argument("--format", choices=FORMATS, default="edge-list")
    ver.add_argument("--max-nodes", type=_positive, default=7)
    ver.add_argument("--max-vertices", type=_positive, default=None)
    return p


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------


def _read(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _graph_from_json(obj: Any, where: str) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphParseError(f"{where}: expected an object with \"n\" and \"edges\"")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise GraphParseError(f"{where}: \"n\" must be a non-negative integer")
    edges = []
    for i, e in enumerate(obj["edges"]):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise GraphParseError(f"{where}: edge {i} must be a pair of integers")
        u, v = e
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"{where}: edge {i} ({u}, {v}) is a loop or out of range")
        edges.append((u, v))
    return Graph(n, edges)


def parse_graphs(text: str, fmt: str) -> list[Graph]:
    """One or more graphs: graph6 takes one per line, json a single object
    or a list of objects, edge-list a single graph."""
    if fmt == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphParseError(exc.msg, exc.lineno, exc.colno) from None
        if isinstance(data, list):
            return [_graph_from_json(x, f"graph {i}") for i, x in enumerate(data)]
        return [_graph_from_json(data, "graph")]
    if fmt == "graph6":
        out = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(from_graph6(line))
            except GraphParseError as exc:
                raise GraphParseError(exc.message, lineno, exc.column) from None
        if not out:
            raise GraphParseError("no graph6 lines found")
        return out
    return [parse_graph(text, "edge-list")]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _budgets(args) -> Budgets:
    return Budgets(args.max_tree_nodes, args.max_orient_edges)


def _exit_for(v: Verdict) -> int:
    if v.verdict == MEMBER:
        return EXIT_OK
    if v.verdict == NON_MEMBER:
        return EXIT_NON_MEMBER
    return EXIT_UNKNOWN


def cmd_gen(args) -> tuple[Any, int]:
    if args.max_nodes > DEFAULT_MAX_NODES:
        raise ResourceError(f"--max-nodes {args.max_nodes} is above the enumeration cap {DEFAULT_MAX_NODES}")
    items: list = []
    for t in enumerate_trees(args.max_nodes):
        if args.emit == "trees":
            items.append(t.to_json())
        else:
            items.append(to_graph6(fully_derive(t).underlying))
    manifest = {
        "version": __version__,
        "emit": args.emit,
        "maxNodes": args.max_nodes,
        "seed": args.seed,
        "count": len(items),
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for item in items:
                fh.write((json.dumps(item) if args.emit == "trees" else item) + "\n")
        return {"manifest": {**manifest, "out": args.out}}, EXIT_OK
    return {"manifest": manifest, "items": items}, EXIT_OK


def cmd_check(args, graphs: list[Graph]) -> tuple[Any, int]:
    results = decide_batch(graphs, _budgets(args))
    docs, codes = [], []
    for r in results:
        if isinstance(r, Exception):
            docs.append({"error": type(r).__name__, "message": str(r)})
            codes.append(EXIT_UNKNOWN)
        else:
            docs.append(r.to_json())
            codes.append(_exit_for(r))
    if len(graphs) == 1:
        return docs[0], codes[0]
    # unknown outranks non-member, which outranks member
    return docs, max(codes)


def classify(g: Graph, family: str, budgets: Budgets | None = None) -> dict:
    budgets = budgets or Budgets()
    if family == "k4":
        return classify_k4_subdivision(g).to_json()
    if family == "k5":
        cls = classify_k5_subdivision(g)
        out = cls.to_json()
        if cls.kind != NOT_IN_FAMILY:
            out["reason"] = decide_k5(g, cls, budgets.max_orient_edges).to_json()
        return out
    if family == "necklace":
        nk = parse_necklace(g)
        if nk is None:
            return {"family": "none"}
        return {"family": "necklace", **nk.to_json(), **decide_necklace(nk).to_json()}
    parsed = parse_dumbbell(g)
    if parsed is None:
        return {"family": "none"}
    spec, (end1, end2) = parsed
    reason = decide_dumbbell(g, spec)
    return {
        "family": "dumbbell",
        "spec": spec.to_json(),
        "ends": [end1, end2],
        "burling": None if reason is None else False,
        "reason": None if reason is None else reason.to_json(),
    }


def cmd_classify(args, graphs: list[Graph]) -> tuple[Any, int]:
    docs = [classify(g, args.family, _budgets(args)) for g in graphs]
    return (docs[0] if len(docs) == 1 else docs), EXIT_OK


def replay_certificate(cert: Any, g: Graph | None) -> dict:
    """Check a saved verdict, witness or bare tree."""
    if not isinstance(cert, dict):
        return {"valid": False, "reason": "certificate must be a JSON object"}
    try:
        if "verdict" in cert:
            if g is None:
                return {"valid": False, "reason": "a verdict needs --graph"}
            v = Verdict.from_json(cert)
            return {"kind": "verdict", "verdict": v.verdict, "valid": verify_verdict(g, v)}
        if "tree" in cert:
            if g is None:
                return {"valid": False, "reason": "a witness needs --graph"}
            res = verify_witness(g, DerivationWitness.from_json(cert))
            return {"kind": "witness", "valid": res.ok, "reason": res.reason}
        violations = validate_tree(BurlingTree.from_json(cert))
        return {"kind": "tree", "valid": not violations, "violations": violations}
    except (KeyError, TypeError, ValueError) as exc:
        return {"valid": False, "reason": f"malformed certificate: {exc}"}


def cmd_verify(args, stdin: TextIO) -> tuple[Any, int]:
    if args.certificate:
        if args.suite:
            raise UsageError("give either a suite or --certificate, not both")
        g = parse_graphs(_read(args.graph, stdin), args.format)[0] if args.graph else None
        try:
            cert = json.loads(_read(args.certificate, stdin))
        except json.JSONDecodeError as exc:
            raise GraphParseError(f"certificate: {exc.msg}", exc.lineno, exc.colno) from None
        report = replay_certificate(cert, g)
        return report, EXIT_OK if report["valid"] else EXIT_NON_MEMBER
    if not args.suite:
        raise UsageError("verify needs a suite or --certificate")
    name = args.suite
    fn = SUITES[name]
    budgets = _budgets(args)
    if name in ("holes", "trichotomy", "domino-dumbbell-theta"):
        if args.max_nodes > DEFAULT_MAX_NODES:
            raise ResourceError(f"--max-nodes {args.max_nodes} is above the enumeration cap {DEFAULT_MAX_NODES}")
        report = fn(args.max_nodes)
    elif name == "k4-table":
        report = fn(args.max_vertices or 11, budgets)
    elif name == "necklace-table":
        report = fn(args.max_vertices or 14, budgets)
    else:
        report = fn(args.seed, budgets)
    return report, EXIT_OK if report["pass"] else EXIT_NON_MEMBER


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _emit(doc: Any, out: str | None, stdout: TextIO) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    stdout.write(text)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"burling-lab: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    try:
        if args.command == "gen":
            doc, code = cmd_gen(args)
            # with --out the stream went to the file; stdout carries the manifest only
            _emit(doc, None, stdout)
            return code
        try:
            if args.command == "verify":
                doc, code = cmd_verify(args, stdin)
            else:
                graphs = parse_graphs(_read(args.graph_file, stdin), args.format)
        except GraphParseError as exc:
            where = getattr(args, "graph_file", None) or args.graph or args.certificate
            where = "<stdin>" if where == "-" else where
            stderr.write(f"burling-lab: {where}: {exc}\n")
            stdout.write(json.dumps({"error": "parse", "file": where, "line": exc.line, "column": exc.column, "message": exc.message}) + "\n")
            return EXIT_PARSE
        if args.command != "verify":
            if args.command == "check":
                doc, code = cmd_check(args, graphs)
            else:
                doc, code = cmd_classify(args, graphs)
        _emit(doc, args.out, stdout)
        return code
    except UsageError as exc:
        stderr.write(f"burling-lab: {exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        stderr.write(f"burling-lab: {exc}\n")
        stdout.write(json.dumps({"error": "cap", "message": str(exc)}) + "\n")
        return EXIT_CAP
    except OSError as exc:
        stderr.write(f"burling-lab: {exc}\n")
        stdout.write(json.dumps({"error": "io", "message": str(exc)}) + "\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
