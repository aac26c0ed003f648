"""Exhaustive property sweeps.

Each suite returns a JSON-ready report with a ``pass`` flag, the number of
instances checked and up to :data:`MAX_COUNTEREXAMPLES` failing instances.
"""

from __future__ import annotations

import random
from collections import Counter
from itertools import combinations, permutations, product
from typing import Callable, Iterator

import networkx as nx

from .certificates import MEMBER, NON_MEMBER, UNKNOWN, Budgets
from .families import (
    BURLING,
    NON_BURLING,
    build_necklace,
    classify_k4_subdivision,
    decide_necklace,
    gallery,
    parse_necklace,
)
from .graph import Graph, has_triangle, to_networkx, iter_holes, star_cutset, subdivide_edge, to_edge_list
from .recognizer import decide_burling, verify_verdict
from .structure import (
    ALL_CONSTRAINTS,
    CORE_CONSTRAINTS,
    check_orientation,
    infer_hole_roles,
    trichotomy_holds,
    trichotomy_refute,
)
from .tree import enumerate_trees, fully_derive

MAX_COUNTEREXAMPLES = 5


class _Report:
    def __init__(self, suite: str, params: dict):
        self.suite = suite
        self.params = params
        self.checked = 0
        self.violations = 0
        self.counterexamples: list[dict] = []
        self.extra: dict = {}

    def fail(self, dump: dict) -> None:
        self.violations += 1
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(dump)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checked": self.checked,
            "violations": self.violations,
            "pass": self.violations == 0,
            **self.extra,
            "counterexamples": self.counterexamples,
        }


def _is_ancestor(t, a: int, v: int) -> bool:
    while v != -1:
        if v == a:
            return True
        v = t.parent[v]
    return False


def holes_suite(max_nodes: int = 7) -> dict:
    """Hole law on every hole of every fully derived graph, and the pivot
    being a tree ancestor of every hole vertex other than the antennas."""
    rep = _Report("holes", {"maxNodes": max_nodes})
    trees = holes_seen = 0
    for t in enumerate_trees(max_nodes):
        og = fully_derive(t)
        trees += 1
        for h in iter_holes(og.underlying):
            holes_seen += 1
            rep.checked += 1
            roles = infer_hole_roles(og, h)
            if not roles:
                rep.fail({"tree": t.to_json(), "hole": list(h), "broken": "two sinks, two sources, pivot"})
            elif not any(all(_is_ancestor(t, r.pivot, v) for v in r.subordinates) for r in roles):
                rep.fail({"tree": t.to_json(), "hole": list(h), "broken": "pivot is not an ancestor"})
    rep.extra = {"trees": trees, "holes": holes_seen}
    return rep.to_json()


def _subsets(n: int) -> Iterator[list[int]]:
    for mask in range(1, 1 << n):
        yield [v for v in range(n) if mask >> v & 1]


def trichotomy_suite(max_nodes: int = 7) -> dict:
    """Every derived graph (all induced subgraphs of every fully derived
    graph) escapes trichotomy_refute and satisfies the oriented trichotomy."""
    rep = _Report("trichotomy", {"maxNodes": max_nodes})
    trees = 0
    for t in enumerate_trees(max_nodes):
        og = fully_derive(t)
        trees += 1
        for sub in _subsets(og.n):
            h, _ = og.induced(sub)
            rep.checked += 1
            if trichotomy_refute(h.underlying) is not None or not trichotomy_holds(h):
                rep.fail({"tree": t.to_json(), "selected": sub})
    rep.extra = {"trees": trees}
    return rep.to_json()


def orientation_suite(max_nodes: int = 7) -> dict:
    """Fully derived orientations satisfy every orientation constraint."""
    rep = _Report("domino-dumbbell-theta", {"maxNodes": max_nodes})
    tally: Counter = Counter()
    for t in enumerate_trees(max_nodes):
        og = fully_derive(t)
        rep.checked += 1
        bad = check_orientation(og, ALL_CONSTRAINTS)
        for kind, _ in bad:
            tally[kind] += 1
        if bad:
            rep.fail({"tree": t.to_json(), "violations": [[k, ev] for k, ev in bad[:3]]})
    rep.extra = {"constraints": sorted(ALL_CONSTRAINTS), "coreConstraints": sorted(CORE_CONSTRAINTS), "byConstraint": dict(sorted(tally.items()))}
    return rep.to_json()


# ---------------------------------------------------------------------------
# K4 subdivisions
# ---------------------------------------------------------------------------

K4_EDGES = tuple(combinations(range(4), 2))


def _k4_canonical(counts: tuple[int, ...]) -> tuple[int, ...]:
    idx = {e: i for i, e in enumerate(K4_EDGES)}
    best = None
    for p in permutations(range(4)):
        img = [0] * 6
        for (u, v), c in zip(K4_EDGES, counts):
            img[idx[tuple(sorted((p[u], p[v])))]] = c
        key = tuple(img)
        if best is None or key > best:
            best = key
    return best


def k4_subdivision(counts: tuple[int, ...]) -> Graph:
    """K4 with ``counts[i]`` new vertices on edge ``K4_EDGES[i]``."""
    n = 4
    edges = []
    for (u, v), c in zip(K4_EDGES, counts):
        chain = [u, *range(n, n + c), v]
        n += c
        edges += list(zip(chain, chain[1:]))
    return Graph(n, edges)


def k4_subdivisions(max_vertices: int = 11) -> list[tuple[tuple[int, ...], Graph]]:
    """Triangle-free subdivisions of K4 up to isomorphism, as
    (edge-subdivision counts, graph)."""
    seen = set()
    out = []
    for counts in product(range(max_vertices - 3), repeat=6):
        if 4 + sum(counts) > max_vertices:
            continue
        key = _k4_canonical(counts)
        if key in seen:
            continue
        seen.add(key)
        g = k4_subdivision(key)
        if not has_triangle(g):
            out.append((key, g))
    out.sort(key=lambda kg: (kg[1].n, kg[0]))
    return out


def k4_table_suite(max_vertices: int = 11, budgets: Budgets | None = None) -> dict:
    rep = _Report("k4-table", {"maxVertices": max_vertices})
    budgets = budgets or Budgets()
    table: Counter = Counter()
    unknown = 0
    for counts, g in k4_subdivisions(max_vertices):
        rep.checked += 1
        cls = classify_k4_subdivision(g)
        v = decide_burling(g, budgets)
        label = f"type {cls.type}" if cls.kind == BURLING else cls.condition
        table[(cls.kind, label, v.verdict, _route(v))] += 1
        unknown += v.verdict == UNKNOWN
        agree = (cls.kind == BURLING and v.verdict == MEMBER) or (cls.kind == NON_BURLING and v.verdict == NON_MEMBER)
        if not agree or not verify_verdict(g, v):
            rep.fail({"counts": list(counts), "classify": cls.to_json(), "verdict": v.verdict})
    rep.extra = {
        "unknown": unknown,
        "table": [
            {"classification": k, "label": lab, "verdict": vd, "route": rt, "count": c}
            for (k, lab, vd, rt), c in sorted(table.items())
        ],
    }
    return rep.to_json()


def _route(v) -> str:
    cert = v.to_json()["certificate"]
    return cert.get("route") or cert.get("kind") or "exhausted"


# ---------------------------------------------------------------------------
# Necklaces
# ---------------------------------------------------------------------------


def _necklace_canonical(beads: tuple, strings: tuple) -> tuple:
    m = len(beads)
    forms = []
    for r in range(m):
        b = beads[r:] + beads[:r]
        s = strings[r:] + strings[:r]
        forms.append((b, s))
        # reversal: bead order flips and string i now sits before bead i
        rb = tuple(reversed(b))
        rs = tuple(reversed(s[:-1])) + (s[-1],)
        forms.append((rb, rs))
    return min(forms)


def necklace_specs(max_vertices: int = 14) -> list[tuple[tuple, tuple]]:
    """Necklace specs ``(beads, strings)`` with at most ``max_vertices``
    vertices, up to rotation and reflection.  A bead is ``(length, p)``:
    its ends split it into paths of lengths ``p`` and ``length - p``."""
    bead_kinds = [(L, p) for L in range(4, max_vertices + 1) for p in range(2, L // 2 + 1)]
    out = set()
    for m in range(2, max_vertices // 3 + 1):
        for beads in product(bead_kinds, repeat=m):
            base = sum(L for L, _ in beads) - m
            if base > max_vertices:
                continue
            room = max_vertices - base
            for strings in product(range(room + 2), repeat=m):
                if base + sum(strings) > max_vertices:
                    continue
                out.add(_necklace_canonical(beads, strings))
    return sorted(out, key=lambda bs: (len(bs[0]), sum(L for L, _ in bs[0]) + sum(bs[1]) - len(bs[0]), bs))


def necklace_graph(beads: tuple, strings: tuple) -> Graph:
    return build_necklace([(L, 0, p) for L, p in beads], list(strings))


def necklace_table_oracle(beads: tuple, strings: tuple) -> tuple[nx.Graph, bool, bool]:
    """Independent rebuild of a necklace spec on named vertices, with the
    expected (Burling, has short bead) answers read off the spec."""
    m = len(beads)
    h = nx.Graph()
    ends = []
    for i, (L, p) in enumerate(beads):
        nx.add_cycle(h, [("bead", i, j) for j in range(L)])
        ends.append([("bead", i, 0), ("bead", i, p)])
    for i, s in enumerate(strings):
        b, a = ends[i][1], ends[(i + 1) % m][0]
        if s == 0:
            h = nx.contracted_nodes(h, b, a, self_loops=False)
            for pair in ends:
                pair[:] = [b if x == a else x for x in pair]
        else:
            nx.add_path(h, [b, *[("string", i, k) for k in range(s - 1)], a])
    short = [bool(set(h[a]) & set(h[b])) for a, b in ends]
    touching = [s == 0 for s in strings]  # bead i and bead i+1 share a vertex
    if m == 2:
        burling = any(touching) or any(short)
    elif m == 3:
        burling = any(short[i] and touching[(i + 1) % 3] for i in range(3))
    else:
        burling = False
    return h, burling, any(short)


def necklace_table_suite(max_vertices: int = 14, budgets: Budgets | None = None) -> dict:
    rep = _Report("necklace-table", {"maxVertices": max_vertices})
    budgets = budgets or Budgets()
    table: Counter = Counter()
    unknown = 0
    for beads, strings in necklace_specs(max_vertices):
        g = necklace_graph(beads, strings)
        rep.checked += 1
        h, expect, short = necklace_table_oracle(beads, strings)
        nk = parse_necklace(g)
        d = decide_necklace(nk) if nk is not None else None
        v = decide_burling(g, budgets)
        unknown += v.verdict == UNKNOWN
        contradicts = (v.verdict == MEMBER and not expect) or (v.verdict == NON_MEMBER and expect)
        has_star = star_cutset(g) is not None
        ok = nx.is_isomorphic(h, to_networkx(g)) and d is not None and d.burling == expect and not contradicts and has_star == short and verify_verdict(g, v)
        if d is not None:
            table[(len(beads), d.clause, d.burling, v.verdict)] += 1
        if not ok:
            rep.fail(
                {
                    "beads": [list(b) for b in beads],
                    "strings": list(strings),
                    "expected": expect,
                    "decision": d.to_json() if d else None,
                    "verdict": v.verdict,
                    "starCutset": has_star,
                    "shortBead": short,
                }
            )
    rep.extra = {
        "unknown": unknown,
        "table": [
            {"m": m, "clause": c, "burling": b, "verdict": vd, "count": k}
            for (m, c, b, vd), k in sorted(table.items())
        ],
    }
    return rep.to_json()


# ---------------------------------------------------------------------------
# Gallery
# ---------------------------------------------------------------------------


def gallery_suite(seed: int = 0, budgets: Budgets | None = None) -> dict:
    """Each gallery graph and one seeded single-edge subdivision of it are
    non-members with replayable reasons."""
    rep = _Report("gallery", {"seed": seed})
    budgets = budgets or Budgets()
    rng = random.Random(seed)
    rows = []
    for name, g, _ in gallery():
        e = sorted(g.edges)[rng.randrange(g.m)]
        h = subdivide_edge(g, e)
        for label, x in ((name, g), (f"{name}+subdivided{list(e)}", h)):
            rep.checked += 1
            v = decide_burling(x, budgets)
            ok = v.verdict == NON_MEMBER and verify_verdict(x, v)
            rows.append({"graph": label, "n": x.n, "m": x.m, "verdict": v.verdict, "reason": _route(v)})
            if not ok:
                rep.fail({"graph": label, "edgeList": to_edge_list(x), "verdict": v.to_json()})
    rep.extra = {"graphs": rows}
    return rep.to_json()


SUITES: dict[str, Callable[..., dict]] = {
    "holes": holes_suite,
    "trichotomy": trichotomy_suite,
    "domino-dumbbell-theta": orientation_suite,
    "necklace-table": necklace_table_suite,
    "k4-table": k4_table_suite,
    "gallery": gallery_suite,
}

