"""Graph families whose membership is settled exactly.

Covers subdivisions of K4 and K5, necklaces, dumbbells built from
vertices that are subordinate in every admissible orientation, and a small
gallery of fixed graphs none of whose subdivisions is a derived graph.

Positive answers come with witnesses obtained by stretching a frozen base
witness: every stretchable segment of a base carries a bottom arc or a top
arc leaving a source, and subdividing such arcs keeps the witness valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Iterable, Mapping, Sequence

from .certificates import FAMILY_THEOREM, ORIENTATION_UNSAT, TRIANGLE, TRICHOTOMY, WHEEL, NonBurlingReason, Verdict
from .graph import (
    Graph,
    ResourceError,
    SubdivisionMap,
    complete_graph,
    find_triangle,
    find_wheel,
    isomorphism,
    iter_subdivision_maps,
    star_cutset,
    threads,
    to_edge_list,
    to_graph6,
)
from .structure import HOLE_EXTREMA, OrientationRefutation, orientation_feasible, trichotomy_refute
from .tree import DerivationWitness, chandelier_witness, classify_arcs, relabel_witness, subdivide_bottom_arc, top_subdivide, verify_witness

K4 = complete_graph(4)
K5 = complete_graph(5)


def _e(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Stretchable base witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Template:
    graph: Graph
    witness: DerivationWitness
    segments: tuple[tuple[int, ...], ...]


def _template(n: int, edges, witness: Mapping, segments) -> Template:
    return Template(Graph(n, edges), DerivationWitness.from_json(witness), tuple(tuple(s) for s in segments))


def _stretchable_arc(w: DerivationWitness, seg: Sequence[int]) -> tuple[tuple[int, int], str] | None:
    og = w.oriented()
    node = w.node_of()
    labels = classify_arcs(w.tree, w.selected)
    sources = set(og.sources())
    arcs = [(x, y) if (x, y) in og.arcs else (y, x) for x, y in zip(seg, seg[1:])]
    for a, b in arcs:
        if "bottom" in labels[(node[a], node[b])]:
            return (a, b), "bottom"
    for a, b in arcs:
        if a in sources and "top" in labels[(node[a], node[b])]:
            return (a, b), "top"
    return None


def stretch(w: DerivationWitness, seg: Sequence[int], k: int) -> tuple[DerivationWitness, list[int]]:
    """Lengthen the path ``seg`` of the derived graph by ``k`` edges.
    Returns the new witness and the lengthened path."""
    found = _stretchable_arc(w, seg)
    if found is None:
        raise ValueError(f"no stretchable arc on {list(seg)}")
    arc, mode = found
    n = len(w.selected)
    w2 = subdivide_bottom_arc(w, arc, k) if mode == "bottom" else top_subdivide(w, arc, k)
    fresh = set(range(n, n + k))
    g2 = w2.graph()
    i = next(j for j in range(len(seg) - 1) if {seg[j], seg[j + 1]} == set(arc))
    x, y = seg[i], seg[i + 1]
    walk, prev, cur = [], x, next(z for z in g2.adj[x] if z in fresh)
    while cur != y:
        walk.append(cur)
        prev, cur = cur, next(z for z in g2.adj[cur] if z != prev and (z in fresh or z == y))
    return w2, [*seg[: i + 1], *walk, *seg[i + 1 :]]


def extend_template(tpl: Template, lengths: Sequence[int]) -> DerivationWitness:
    """Stretch each segment of ``tpl`` to the requested length (in edges)."""
    if len(lengths) != len(tpl.segments):
        raise ValueError("one length per segment")
    w = tpl.witness
    segs = [list(s) for s in tpl.segments]
    for i, want in enumerate(lengths):
        have = len(segs[i]) - 1
        if want < have:
            raise ValueError(f"segment {i} cannot be shortened below {have}")
        if want > have:
            w, segs[i] = stretch(w, segs[i], want - have)
    return w


def realize(tpl: Template, lengths: Sequence[int], g: Graph) -> DerivationWitness | None:
    """A verified witness for ``g`` if stretching ``tpl`` produces a copy of it."""
    w = extend_template(tpl, lengths)
    iso = isomorphism(w.graph(), g)
    if iso is None:
        return None
    w = relabel_witness(w, iso)
    return w if verify_witness(g, w) else None


# a=0 b=1 c=2 d=3; ab and ac stay single edges, ad runs through 4 and bc through 5
K4_BASE = _template(
    6,
    [(0, 1), (0, 2), (1, 3), (2, 3), (0, 4), (4, 3), (1, 5), (5, 2)],
    {
        "tree": {
            "root": 0,
            "parent": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 4, "6": 5},
            "lastBorn": {"0": 4, "4": 5, "5": 6},
            "choosePath": {"1": [4, 5], "2": [4, 5, 6], "3": [4, 5, 6]},
        },
        "selected": [1, 2, 3, 4, 5, 6],
        "map": {"1": 4, "2": 1, "3": 2, "4": 3, "5": 0, "6": 5},
    },
    [[0, 4, 3], [1, 5, 2], [1, 3], [2, 3]],
)

# beads 0-1-2-3 (ends 0, 2; side 0-1-2 stays short) and 4-5-6-7 (ends 4, 6);
# strings 2-4 and 6-0
NECKLACE2_SHORT = _template(
    8,
    [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (2, 4), (6, 0)],
    {
        "tree": {
            "root": 0,
            "parent": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 4, "6": 4, "7": 6, "8": 6, "9": 8},
            "lastBorn": {"0": 4, "4": 6, "6": 8, "8": 9},
            "choosePath": {"1": [4, 5], "2": [4, 5], "3": [4, 6, 8, 9], "5": [6, 7], "7": [8, 9]},
        },
        "selected": [1, 2, 3, 4, 5, 7, 8, 9],
        "map": {"1": 5, "2": 7, "3": 0, "4": 6, "5": 4, "7": 2, "8": 1, "9": 3},
    },
    [[0, 3, 2], [4, 5, 6], [4, 7, 6], [2, 4], [6, 0]],
)

# beads 0-1-2-3 and 2-4-5-6 share 2; the short bead 5-7-0-8 (side 5-7-0 stays
# short) touches both, all strings empty
NECKLACE3_TOUCHING = _template(
    9,
    [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2), (5, 7), (7, 0), (5, 8), (8, 0)],
    {
        "tree": {
            "root": 0,
            "parent": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 0, "6": 5, "7": 5, "8": 5, "9": 8},
            "lastBorn": {"0": 5, "5": 8, "8": 9},
            "choosePath": {"1": [5, 6], "2": [5, 6], "3": [5, 7], "4": [5, 7], "6": [8, 9], "7": [8, 9]},
        },
        "selected": [1, 2, 3, 4, 5, 6, 7, 8, 9],
        "map": {"1": 1, "2": 3, "3": 4, "4": 6, "5": 2, "6": 0, "7": 5, "8": 7, "9": 8},
    },
    [[0, 1, 2], [0, 3, 2], [2, 4, 5], [2, 6, 5], [5, 8, 0]],
)

# beads 0-1-2-3 and 2-4-5-6 as above; the short bead 7-8-9-10 (side 7-8-9
# stays short) hangs on strings 5-7 and 9-0.  Sources 1, 3, 4, 6; the two
# string arcs 5->7 and 0->9 each read off a shadow node.
NECKLACE3_TWO_STRINGS = _template(
    11,
    [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2), (7, 8), (8, 9), (9, 10), (10, 7), (5, 7), (9, 0)],
    {
        "tree": {
            "root": 0,
            "parent": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 0, "6": 5, "7": 5, "8": 5, "9": 8, "10": 8, "11": 8, "12": 11},
            "lastBorn": {"0": 5, "5": 8, "8": 11, "11": 12},
            "choosePath": {"1": [5, 6], "2": [5, 6], "3": [5, 7], "4": [5, 7], "6": [8, 10], "7": [8, 9], "9": [11, 12], "10": [11, 12]},
        },
        "selected": [1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12],
        "map": {"1": 1, "2": 3, "3": 4, "4": 6, "5": 2, "6": 0, "7": 5, "9": 7, "10": 9, "11": 8, "12": 10},
    },
    [[0, 1, 2], [0, 3, 2], [2, 4, 5], [2, 6, 5], [7, 10, 9], [5, 7], [9, 0]],
)

# the previous base with the string arc 0->9 contracted: short bead 7-8-0-9
# (side 7-8-0 stays short), string 5-7
NECKLACE3_ONE_STRING = _template(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2), (5, 7), (7, 8), (8, 0), (7, 9), (9, 0)],
    {
        "tree": {
            "root": 0,
            "parent": {"1": 0, "2": 0, "3": 0, "4": 0, "5": 0, "6": 5, "7": 5, "8": 5, "9": 8, "10": 8, "11": 8, "12": 11},
            "lastBorn": {"0": 5, "5": 8, "8": 11, "11": 12},
            "choosePath": {"1": [5, 6], "2": [5, 6], "3": [5, 7], "4": [5, 7], "6": [8, 11, 12], "7": [8, 9], "9": [11, 12]},
        },
        "selected": [1, 2, 3, 4, 5, 6, 7, 9, 11, 12],
        "map": {"1": 1, "2": 3, "3": 4, "4": 6, "5": 2, "6": 0, "7": 5, "9": 7, "11": 8, "12": 9},
    },
    [[0, 1, 2], [0, 3, 2], [2, 4, 5], [2, 6, 5], [7, 9, 0], [5, 7]],
)


# ---------------------------------------------------------------------------
# K4 subdivisions
# ---------------------------------------------------------------------------

NOT_IN_FAMILY = "none"
BURLING = "burling"
NON_BURLING = "non-burling"


@dataclass(frozen=True)
class K4Class:
    """``labeling`` lists host vertices a, b, c, d with ab and ac unsubdivided
    and ad, bc subdivided.  ``condition`` names why no labeling exists."""

    kind: str
    subdivision: SubdivisionMap | None = field(default=None, compare=False)
    labeling: tuple[int, int, int, int] | None = None
    type: int | None = None
    condition: str = ""

    @property
    def is_burling(self) -> bool:
        return self.kind == BURLING

    def to_json(self) -> dict:
        if self.kind == NOT_IN_FAMILY:
            return {"family": "none"}
        out: dict[str, Any] = {"family": "k4", "verdict": self.kind}
        if self.kind == BURLING:
            out["type"] = self.type
            out["labeling"] = dict(zip("abcd", self.labeling))
        else:
            out["condition"] = self.condition
        out["branch"] = list(self.subdivision.branch)
        return out


def _k4_failure(kept: set[tuple[int, int]]) -> str:
    if not kept:
        return "no-unsubdivided-edge"
    if any(all(_e(p, q) in kept for p, q in combinations(tri, 2)) for tri in combinations(range(4), 3)):
        return "unsubdivided-triangle"
    if any(sum(1 for e in kept if v in e) == 3 for v in range(4)):
        return "unsubdivided-claw"
    if len(kept) == 1:
        return "single-unsubdivided-edge"
    return "unsubdivided-matching"


def k4_labeling(kept: set[tuple[int, int]]) -> tuple[int, int, int, int] | None:
    """Pattern labeling (a, b, c, d) with ab, ac kept and ad, bc subdivided."""
    for a, b, c, d in permutations(range(4)):
        if _e(a, b) in kept and _e(a, c) in kept and _e(a, d) not in kept and _e(b, c) not in kept:
            return a, b, c, d
    return None


def classify_k4_subdivision(g: Graph) -> K4Class:
    smap = next(iter_subdivision_maps(g, K4), None)
    if smap is None:
        return K4Class(NOT_IN_FAMILY)
    kept = {e for e, p in smap.paths.items() if len(p) == 2}
    lab = k4_labeling(kept)
    if lab is None:
        return K4Class(NON_BURLING, smap, condition=_k4_failure(kept))
    host = tuple(smap.branch[p] for p in lab)
    return K4Class(BURLING, smap, host, 6 - len(kept))


def k4_witness(g: Graph, cls: K4Class | None = None) -> DerivationWitness | None:
    cls = cls or classify_k4_subdivision(g)
    if not cls.is_burling:
        return None
    smap = cls.subdivision
    a, b, c, d = (smap.branch.index(v) for v in cls.labeling)
    lengths = smap.path_lengths()
    want = [lengths[_e(a, d)], lengths[_e(b, c)], lengths[_e(b, d)], lengths[_e(c, d)]]
    return realize(K4_BASE, want, g)


# ---------------------------------------------------------------------------
# K5 subdivisions
# ---------------------------------------------------------------------------

IMMEDIATE = "immediate"
TYPE_A = "type-A"
TYPE_B = "type-B"


@dataclass(frozen=True)
class K5Class:
    """``cycle`` is the ring of unsubdivided edges (host branch vertices in
    ring order).  For ``immediate`` results ``evidence`` holds either a
    triangle or an inner K4 subdivision failing the labeling test."""

    kind: str
    subdivision: SubdivisionMap | None = field(default=None, compare=False)
    cycle: tuple[int, ...] = ()
    evidence: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        if self.kind == NOT_IN_FAMILY:
            return {"family": "none"}
        out: dict[str, Any] = {"family": "k5", "class": self.kind, "branch": list(self.subdivision.branch)}
        if self.cycle:
            out["unsubdividedCycle"] = list(self.cycle)
        if self.evidence:
            out["evidence"] = self.evidence
        return out


def _ring(edges: set[tuple[int, int]]) -> list[int] | None:
    """The vertices of ``edges`` in cyclic order if they form one cycle."""
    verts = sorted({v for e in edges for v in e})
    if len(verts) != len(edges) or any(sum(1 for e in edges if v in e) != 2 for v in verts):
        return None
    ring = [verts[0]]
    while len(ring) < len(verts):
        nxt = [w for e in edges for w in e if ring[-1] in e and w != ring[-1] and w not in ring]
        if not nxt:
            return None
        ring.append(min(nxt))
    return ring


def _inner_vertices(smap: SubdivisionMap, pattern_vertices: Iterable[int]) -> list[int]:
    keep = set(pattern_vertices)
    out = {smap.branch[p] for p in keep}
    for (p, q), path in smap.paths.items():
        if p in keep and q in keep:
            out.update(path)
    return sorted(out)


def classify_k5_subdivision(g: Graph) -> K5Class:
    smap = next(iter_subdivision_maps(g, K5), None)
    if smap is None:
        return K5Class(NOT_IN_FAMILY)
    tri = find_triangle(g)
    if tri is not None:
        return K5Class(IMMEDIATE, smap, evidence={"triangle": list(tri)})
    for e in range(5):
        inner = _inner_vertices(smap, [p for p in range(5) if p != e])
        h, _ = g.induced(inner)
        cls = classify_k4_subdivision(h)
        if not cls.is_burling:
            return K5Class(IMMEDIATE, smap, evidence={"innerK4": inner, "condition": cls.condition})
    kept = {e for e, p in smap.paths.items() if len(p) == 2}
    ring = _ring(kept)
    if ring is None or len(ring) not in (4, 5):
        raise AssertionError("a triangle-free K5 subdivision whose inner K4s pass must have a kept 4- or 5-ring")
    host = tuple(smap.branch[p] for p in ring)
    return K5Class(TYPE_A if len(ring) == 4 else TYPE_B, smap, host)


def k5_type_a_core(g: Graph, cls: K5Class) -> list[int]:
    """Vertices of the ring, the fifth branch vertex and its four spokes,
    leaving out the two diagonals of the ring."""
    smap = cls.subdivision
    ring = [smap.branch.index(v) for v in cls.cycle]
    diagonals = {_e(ring[0], ring[2]), _e(ring[1], ring[3])}
    drop = set()
    for e, path in smap.paths.items():
        if e in diagonals:
            drop.update(path[1:-1])
    return [v for v in range(g.n) if v not in drop]


def decide_k5(g: Graph, cls: K5Class | None = None, max_edges: int = 28) -> NonBurlingReason:
    cls = cls or classify_k5_subdivision(g)
    if cls.kind == NOT_IN_FAMILY:
        raise ValueError("not a subdivision of K5")
    if cls.kind == IMMEDIATE:
        if "triangle" in cls.evidence:
            return NonBurlingReason(TRIANGLE, {"vertices": cls.evidence["triangle"]})
        reason = refute_subgraph(g, cls.evidence["innerK4"])
        if reason is not None:
            return reason
    elif cls.kind == TYPE_A:
        ref = trichotomy_refute(g, k5_type_a_core(g, cls))
        if ref is not None:
            return NonBurlingReason(TRICHOTOMY, _strip(ref.to_json()))
    else:
        try:
            ref = orientation_feasible(g, {HOLE_EXTREMA}, max_edges=max_edges)
        except ResourceError:
            ref = None
        if isinstance(ref, OrientationRefutation):
            return NonBurlingReason(ORIENTATION_UNSAT, _strip(ref.to_json()))
    return _family_reason("k5-subdivision", cls.kind)


def _strip(data: dict) -> dict:
    return {k: v for k, v in data.items() if k != "kind"}


def refute_subgraph(g: Graph, vertices: Sequence[int]) -> NonBurlingReason | None:
    """Triangle, wheel or trichotomy evidence inside the induced subgraph."""
    tri = find_triangle(g)
    if tri is not None:
        return NonBurlingReason(TRIANGLE, {"vertices": list(tri)})
    h, keep = g.induced(vertices)
    wheel = find_wheel(h)
    if wheel is not None:
        hole, centre = wheel
        return NonBurlingReason(WHEEL, {"hole": [keep[v] for v in hole], "center": keep[centre]})
    ref = trichotomy_refute(g, vertices)
    if ref is not None:
        return NonBurlingReason(TRICHOTOMY, _strip(ref.to_json()))
    return None


def _family_reason(theorem: str, clause: str) -> NonBurlingReason:
    return NonBurlingReason(FAMILY_THEOREM, {"theorem": theorem, "clause": clause})


# ---------------------------------------------------------------------------
# Necklaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bead:
    """Both ``sides`` run from ``a`` to ``b``."""

    a: int
    b: int
    sides: tuple[tuple[int, ...], tuple[int, ...]]

    @property
    def cycle(self) -> tuple[int, ...]:
        return self.sides[0] + tuple(reversed(self.sides[1][1:-1]))

    @property
    def side_lengths(self) -> tuple[int, int]:
        return len(self.sides[0]) - 1, len(self.sides[1]) - 1

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.sides[0]) | frozenset(self.sides[1])


@dataclass(frozen=True)
class NecklaceStructure:
    """``strings[i]`` runs from ``beads[i].b`` to ``beads[i+1].a``
    (indices wrap); a single-vertex string means the two ends coincide."""

    beads: tuple[Bead, ...]
    strings: tuple[tuple[int, ...], ...]
    graph: Graph = field(compare=False, repr=False)

    @property
    def m(self) -> int:
        return len(self.beads)

    @property
    def string_lengths(self) -> tuple[int, ...]:
        return tuple(len(s) - 1 for s in self.strings)

    @property
    def short_beads(self) -> tuple[int, ...]:
        g = self.graph
        return tuple(i for i, bd in enumerate(self.beads) if g.adj[bd.a] & g.adj[bd.b])

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "beads": [{"cycle": list(bd.cycle), "a": bd.a, "b": bd.b} for bd in self.beads],
            "strings": [list(s) for s in self.strings],
            "shortBeads": list(self.short_beads),
        }

    def spec(self) -> tuple[list[tuple[int, int, int]], list[int]]:
        """Arguments for :func:`build_necklace` rebuilding an isomorphic copy."""
        beads = []
        for bd in self.beads:
            p, _ = bd.side_lengths
            beads.append((len(bd.cycle), 0, p))
        return beads, list(self.string_lengths)


def build_necklace(beads: Sequence[Sequence[int]], strings: Sequence[int]) -> Graph:
    """Assemble an m-necklace.

    ``beads[i] = (length, a, b)`` places a cycle with its ends at positions
    ``a`` and ``b``; ``strings[i]`` is the length of the path from the
    ``b`` end of bead ``i`` to the ``a`` end of bead ``i+1``.  Vertices are
    numbered bead by bead, then string by string, after identifying the ends
    of empty strings.
    """
    m = len(beads)
    if m < 2:
        raise ValueError("a necklace needs at least two beads")
    if len(strings) != m:
        raise ValueError("one string per bead")
    raw_edges: list[tuple[int, int]] = []
    ends: list[tuple[int, int]] = []
    n = 0
    for length, a, b in beads:
        if length < 4:
            raise ValueError("beads must have length at least 4")
        a, b = a % length, b % length
        if (b - a) % length in (0, 1, length - 1):
            raise ValueError(f"bead ends {a} and {b} must be distinct and non-adjacent")
        raw_edges += [(n + i, n + (i + 1) % length) for i in range(length)]
        ends.append((n + a, n + b))
        n += length
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, s in enumerate(strings):
        if s < 0:
            raise ValueError("string lengths must be non-negative")
        start, stop = ends[i][1], ends[(i + 1) % m][0]
        if s == 0:
            ra, rb = find(start), find(stop)
            parent[max(ra, rb)] = min(ra, rb)
            continue
        chain = [start, *range(n, n + s - 1), stop]
        parent.extend(range(n, n + s - 1))
        n += s - 1
        raw_edges += list(zip(chain, chain[1:]))
    roots = sorted({find(x) for x in range(n)})
    label = {r: i for i, r in enumerate(roots)}
    return Graph(len(roots), [(label[find(u)], label[find(v)]) for u, v in raw_edges])


def necklace_from_json(data: Mapping) -> Graph:
    beads = [(int(b["len"]), int(b["a"]), int(b["b"])) for b in data["beads"]]
    return build_necklace(beads, [int(s) for s in data["strings"]])


def _bead(a: int, b: int, t1: tuple[int, ...], t2: tuple[int, ...]) -> Bead:
    s1 = t1 if t1[0] == a else tuple(reversed(t1))
    s2 = t2 if t2[0] == a else tuple(reversed(t2))
    return Bead(a, b, tuple(sorted((s1, s2))))


def _necklace_key(nk: NecklaceStructure) -> tuple:
    flat = tuple(x for bd in nk.beads for x in (bd.a, bd.b))
    return flat, tuple(bd.sides for bd in nk.beads), nk.strings


def parse_necklace(g: Graph) -> NecklaceStructure | None:
    """Read ``g`` as a necklace; among the several ways of doing so (start
    bead, direction, and for two beads on the same two ends, the pairing of
    their sides), the lexicographically least by bead ends is returned."""
    if g.n == 0 or not g.is_connected():
        return None
    dec = threads(g)
    if dec is None:
        return None
    branch, paths = dec
    if not branch or any(g.degree(v) not in (3, 4) for v in branch):
        return None
    by_pair: dict[tuple[int, int], list[tuple[int, ...]]] = {}
    for p in paths:
        if p[0] == p[-1]:
            return None
        by_pair.setdefault(_e(p[0], p[-1]), []).append(p)
    for group in by_pair.values():
        group.sort()
    candidates: list[NecklaceStructure] = []
    if len(by_pair) == 1:
        ((x, y), group), = by_pair.items()
        if len(group) != 4 or any(len(p) < 3 for p in group):
            return None
        for pair in combinations(range(4), 2):
            rest = [i for i in range(4) if i not in pair]
            for a, b in ((x, y), (y, x)):
                b1 = _bead(a, b, group[pair[0]], group[pair[1]])
                b2 = _bead(b, a, group[rest[0]], group[rest[1]])
                candidates.append(NecklaceStructure((b1, b2), ((b,), (a,)), g))
    else:
        if any(len(grp) not in (1, 2) for grp in by_pair.values()):
            return None
        skel: dict[int, list[int]] = {v: [] for v in branch}
        for u, v in by_pair:
            skel[u].append(v)
            skel[v].append(u)
        if any(len(nb) != 2 for nb in skel.values()):
            return None
        order = [min(branch)]
        while len(order) < len(branch):
            nxt = [w for w in skel[order[-1]] if w not in order]
            if not nxt:
                return None
            order.append(min(nxt))
        if order[0] not in skel[order[-1]]:
            return None
        for seq in (order, order[::-1]):
            links = [by_pair[_e(seq[i], seq[(i + 1) % len(seq)])] for i in range(len(seq))]
            if any(len(links[i]) == 1 and len(links[i - 1]) == 1 for i in range(len(links))):
                return None
            bead_at = [i for i in range(len(links)) if len(links[i]) == 2]
            if len(bead_at) < 2:
                return None
            for start in bead_at:
                beads, strings = [], []
                k = len(seq)
                for step in range(k):
                    i = (start + step) % k
                    a, b = seq[i], seq[(i + 1) % k]
                    if len(links[i]) == 2:
                        t1, t2 = links[i]
                        if len(t1) < 3 or len(t2) < 3:
                            return None
                        beads.append(_bead(a, b, t1, t2))
                        if len(links[(i + 1) % k]) == 2:
                            strings.append((b,))
                    else:
                        t = links[i][0]
                        strings.append(t if t[0] == a else tuple(reversed(t)))
                candidates.append(NecklaceStructure(tuple(beads), tuple(strings), g))
    return min(candidates, key=_necklace_key) if candidates else None


@dataclass(frozen=True)
class NecklaceDecision:
    burling: bool
    clause: str

    def to_json(self) -> dict:
        return {"burling": self.burling, "clause": self.clause}


def _share(b1: Bead, b2: Bead) -> bool:
    return bool(b1.vertices & b2.vertices)


def decide_necklace(nk: NecklaceStructure) -> NecklaceDecision:
    if nk.m == 2:
        if _share(*nk.beads):
            return NecklaceDecision(True, "beads share a vertex")
        if star_cutset(nk.graph) is not None:
            return NecklaceDecision(True, "star cutset (short bead)")
        return NecklaceDecision(False, "disjoint beads and no star cutset")
    if nk.m == 3:
        short = nk.short_beads
        if not short:
            return NecklaceDecision(False, "three beads and no short bead")
        for i in short:
            if _share(nk.beads[(i + 1) % 3], nk.beads[(i + 2) % 3]):
                return NecklaceDecision(True, "short bead and the other two beads share a vertex")
        return NecklaceDecision(False, "no short bead whose companions share a vertex")
    return NecklaceDecision(False, "four or more beads")


def necklace_witness(nk: NecklaceStructure) -> DerivationWitness | None:
    """A witness for a necklace decided Burling, or ``None`` when the
    required base witness is unavailable."""
    d = decide_necklace(nk)
    if not d.burling:
        return None
    g = nk.graph
    if nk.m == 2 and _share(*nk.beads):
        return chandelier_witness(g)
    if nk.m == 2:
        for s in nk.short_beads:
            short, other = nk.beads[s], nk.beads[1 - s]
            if 2 not in short.side_lengths:
                continue
            long_side = max(short.side_lengths)
            out_len, back_len = nk.string_lengths[s], nk.string_lengths[1 - s]
            w = realize(NECKLACE2_SHORT, [long_side, *other.side_lengths, out_len, back_len], g)
            if w is not None:
                return w
        return None
    for s in nk.short_beads:
        short = nk.beads[s]
        p, q = (s + 1) % 3, (s + 2) % 3
        lens = nk.string_lengths
        if lens[p] != 0 or 2 not in short.side_lengths:
            continue
        long_side = max(short.side_lengths)
        to_p, from_q = lens[s], lens[q]
        if to_p and not from_q:
            # walk the other way round so the empty string leads into the short bead
            p, q = q, p
            to_p, from_q = from_q, to_p
        sides = [*nk.beads[p].side_lengths, *nk.beads[q].side_lengths]
        if not to_p and not from_q:
            tpl, extra = NECKLACE3_TOUCHING, []
        elif not to_p:
            tpl, extra = NECKLACE3_ONE_STRING, [from_q]
        else:
            tpl, extra = NECKLACE3_TWO_STRINGS, [from_q, to_p]
        w = realize(tpl, [*sides, long_side, *extra], g)
        if w is not None:
            return w
    return None


# ---------------------------------------------------------------------------
# Dumbbells
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DumbbellSpec:
    g1: Graph
    g2: Graph
    x1: int
    x2: int
    connector_length: int

    def __post_init__(self):
        if not (0 <= self.x1 < self.g1.n and 0 <= self.x2 < self.g2.n):
            raise ValueError("connector ends must be vertices of their graphs")
        if self.connector_length < 0:
            raise ValueError("connector length must be non-negative")

    def to_json(self) -> dict:
        return {
            "g1": {"n": self.g1.n, "edges": [list(e) for e in self.g1.edges]},
            "g2": {"n": self.g2.n, "edges": [list(e) for e in self.g2.edges]},
            "x1": self.x1,
            "x2": self.x2,
            "connectorLength": self.connector_length,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DumbbellSpec":
        g1 = Graph(int(data["g1"]["n"]), data["g1"]["edges"])
        g2 = Graph(int(data["g2"]["n"]), data["g2"]["edges"])
        return cls(g1, g2, int(data["x1"]), int(data["x2"]), int(data["connectorLength"]))


def build_dumbbell(spec: DumbbellSpec) -> Graph:
    """``g1`` keeps its labels and ``g2`` follows; the connector's internal
    vertices come last.  An empty connector merges ``x2`` into ``x1``."""
    n1 = spec.g1.n
    edges = list(spec.g1.edges)
    if spec.connector_length == 0:
        others = [v for v in range(spec.g2.n) if v != spec.x2]
        place = {v: n1 + i for i, v in enumerate(others)}
        place[spec.x2] = spec.x1
        n = n1 + len(others)
    else:
        place = {v: n1 + v for v in range(spec.g2.n)}
        n = n1 + spec.g2.n
        chain = [spec.x1, *range(n, n + spec.connector_length - 1), place[spec.x2]]
        n += spec.connector_length - 1
        edges += list(zip(chain, chain[1:]))
    edges += [(place[u], place[v]) for u, v in spec.g2.edges]
    return Graph(n, edges)


def parse_dumbbell(g: Graph) -> tuple[DumbbellSpec, tuple[list[int], list[int]]] | None:
    """Split ``g`` into two 2-connected ends joined by a path.  Returns the
    spec and, for each end, the host vertices it came from."""
    import networkx as nx

    from .graph import to_networkx

    if g.n == 0 or not g.is_connected():
        return None
    blocks = [sorted(b) for b in nx.biconnected_components(to_networkx(g))]
    big = sorted((b for b in blocks if len(b) >= 3), key=lambda b: b[0])
    if len(big) != 2:
        return None
    bridges = [b for b in blocks if len(b) == 2]
    end1, end2 = set(big[0]), set(big[1])
    covered = end1 | end2 | {v for b in bridges for v in b}
    if len(covered) != g.n:
        return None
    common = end1 & end2
    if common:
        if bridges or len(common) != 1:
            return None
        x = common.pop()
        x1 = x2 = x
        length = 0
    else:
        deg = {}
        for u, v in bridges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        tips = [v for v, d in deg.items() if d == 1]
        if len(tips) != 2 or any(d > 2 for d in deg.values()):
            return None
        inner = [v for v, d in deg.items() if d == 2]
        if any(v in end1 or v in end2 for v in inner):
            return None
        x1 = next((v for v in tips if v in end1), None)
        x2 = next((v for v in tips if v in end2), None)
        if x1 is None or x2 is None:
            return None
        length = len(bridges)
    h1, keep1 = g.induced(big[0])
    h2, keep2 = g.induced(big[1])
    spec = DumbbellSpec(h1, h2, keep1.index(x1), keep2.index(x2), length)
    return spec, (keep1, keep2)


def global_subordinate_witness(g: Graph, v: int) -> dict | None:
    """Certify that ``v`` is subordinate in some hole under every derived
    orientation of ``g``.

    Two patterns are recognised: ``g`` subdivides a K4 in which only the
    two edges from ``v`` to ``y`` and ``z`` may be left unsubdivided
    (``k4-apex``); or ``g`` is a long theta and ``v`` and both its
    neighbours have degree 2 (``theta-deep``).
    """
    if not 0 <= v < g.n:
        return None
    smap = next(iter_subdivision_maps(g, K4), None)
    if smap is not None and v in smap.branch:
        p = smap.branch.index(v)
        kept = {e for e, path in smap.paths.items() if len(path) == 2}
        others = [q for q in range(4) if q != p]
        for y, z in combinations(others, 2):
            if kept <= {_e(p, y), _e(p, z)}:
                return {
                    "pattern": "k4-apex",
                    "vertex": v,
                    "ends": [smap.branch[y], smap.branch[z]],
                    "exact": len(kept) == 2,
                }
    theta = long_theta_apexes(g)
    if theta is not None and g.degree(v) == 2 and all(g.degree(w) == 2 for w in g.adj[v]):
        return {"pattern": "theta-deep", "vertex": v, "apexes": list(theta)}
    return None


def long_theta_apexes(g: Graph) -> tuple[int, int] | None:
    dec = threads(g)
    if dec is None or not g.is_connected():
        return None
    branch, paths = dec
    if len(branch) != 2 or len(paths) != 3 or any(len(p) < 4 for p in paths):
        return None
    return branch[0], branch[1]


def decide_dumbbell(d: Graph, spec: DumbbellSpec) -> NonBurlingReason | None:
    """Non-membership of every subdivision of ``d`` when both connector
    ends are certified globally subordinate; ``None`` otherwise."""
    if isomorphism(build_dumbbell(spec), d) is None:
        raise ValueError("graph is not the dumbbell described by the spec")
    c1 = global_subordinate_witness(spec.g1, spec.x1)
    c2 = global_subordinate_witness(spec.g2, spec.x2)
    if c1 is None or c2 is None:
        return None
    return NonBurlingReason(
        FAMILY_THEOREM,
        {
            "theorem": "subordinate-dumbbell",
            "clause": f"{c1['pattern']} + {c2['pattern']}",
            "connectorLength": spec.connector_length,
        },
    )


def type4_k4() -> tuple[Graph, int]:
    """The 8-vertex K4 subdivision whose only unsubdivided edges are the two
    at the returned vertex."""
    # x=0 y=1 z=2 c=3; yz, xc, cy, cz each get one internal vertex
    return Graph(8, [(0, 1), (0, 2), (1, 4), (4, 2), (0, 5), (5, 3), (3, 6), (6, 1), (3, 7), (7, 2)]), 0


def long_theta(lengths: Sequence[int] = (4, 3, 3)) -> tuple[Graph, int]:
    """Theta with apexes 0 and 1; returns it with the middle vertex of the
    first path."""
    if len(lengths) != 3 or any(k < 2 for k in lengths):
        raise ValueError("three paths of length at least 2")
    edges = []
    n = 2
    mids = []
    for k in lengths:
        chain = [0, *range(n, n + k - 1), 1]
        n += k - 1
        edges += list(zip(chain, chain[1:]))
        mids.append(chain[len(chain) // 2])
    return Graph(n, edges), mids[0]


def dumbbell_gallery() -> list[tuple[str, DumbbellSpec]]:
    k4, x = type4_k4()
    th, t = long_theta((4, 3, 3))
    return [
        ("k4_k4_dumbbell", DumbbellSpec(k4, k4, x, x, 1)),
        ("theta_k4_dumbbell", DumbbellSpec(th, k4, t, x, 1)),
        ("theta_theta_dumbbell", DumbbellSpec(th, th, t, t, 1)),
    ]


# ---------------------------------------------------------------------------
# Gallery
# ---------------------------------------------------------------------------


def _assemble(names: str, plain: Sequence[str], paths: Sequence[tuple[str, int]]) -> Graph:
    """Branch vertices named by single letters; ``paths`` gives ``("pq", k)``
    for a p-q path with ``k`` internal vertices."""
    idx = {c: i for i, c in enumerate(names)}
    edges = [(idx[p], idx[q]) for p, q in plain]
    n = len(names)
    for (p, q), k in paths:
        chain = [idx[p], *range(n, n + k), idx[q]]
        n += k
        edges += list(zip(chain, chain[1:]))
    return Graph(n, edges)


def twin_k4_glued_on_edge() -> Graph:
    """Two K4 subdivisions on {x, y, z, u} and {x, y, w, v} sharing the edge
    xy; xy, zy and xw stay single edges and the other eight get one
    internal vertex each.  14 vertices."""
    sub = ["xv", "yv", "wv", "xu", "yu", "zu", "zx", "wy"]
    return _assemble("xyzwuv", ["xy", "zy", "xw"], [(e, 1) for e in sub])


def twin_k4_sharing_vertex() -> Graph:
    """Two type-4 K4 subdivisions sharing the vertex z, their apexes x1=a
    and x2=b joined by an edge (which closes the triangle abz).  15 vertices."""
    # a, p, c: apex, outer and centre of the first copy; b, q, d of the second
    sub = ["pz", "ac", "cp", "cz", "qz", "bd", "dq", "dz"]
    return _assemble("zapcbqd", ["ap", "az", "bq", "bz", "ab"], [(e, 1) for e in sub])


def twin_k4_with_theta() -> Graph:
    """Two type-4 K4 subdivisions with apexes a and b, the outer vertices
    s and t of their kept edges joined by an edge, and two more a-b paths of
    length 3 closing a long theta.  20 vertices."""
    sub = ["ps", "ac", "cp", "cs", "qt", "bd", "dq", "dt"]
    return _assemble("apscbqtd", ["ap", "as", "bq", "bt", "st"], [*((e, 1) for e in sub), ("ab", 2), ("ab", 2)])


GALLERY_THEOREMS = {
    "twin_k4_glued_on_edge": ORIENTATION_UNSAT,
    "twin_k4_sharing_vertex": TRIANGLE,
    "twin_k4_with_theta": ORIENTATION_UNSAT,
}


def gallery() -> list[tuple[str, Graph, str]]:
    return [
        ("twin_k4_glued_on_edge", twin_k4_glued_on_edge(), GALLERY_THEOREMS["twin_k4_glued_on_edge"]),
        ("twin_k4_sharing_vertex", twin_k4_sharing_vertex(), GALLERY_THEOREMS["twin_k4_sharing_vertex"]),
        ("twin_k4_with_theta", twin_k4_with_theta(), GALLERY_THEOREMS["twin_k4_with_theta"]),
    ]


def gallery_export() -> list[dict]:
    return [
        {"name": name, "n": g.n, "edgeList": to_edge_list(g), "graph6": to_graph6(g), "expected": kind}
        for name, g, kind in gallery()
    ]


def _skeleton(g: Graph) -> tuple[list[int], dict[tuple[int, int], list[int]]] | None:
    dec = threads(g)
    if dec is None:
        return None
    branch, paths = dec
    skel: dict[tuple[int, int], list[int]] = {}
    for p in paths:
        if p[0] == p[-1]:
            return None
        skel.setdefault(_e(p[0], p[-1]), []).append(len(p) - 1)
    for v in skel.values():
        v.sort()
    return branch, skel


def subdivides(g: Graph, base: Graph) -> bool:
    """Whether ``g`` is obtained from ``base`` by subdividing edges, where
    ``base`` has minimum degree at least 3 after suppressing degree-2
    vertices."""
    sg, sb = _skeleton(g), _skeleton(base)
    if sg is None or sb is None:
        return False
    bg, kg = sg
    bb, kb = sb
    if len(bg) != len(bb) or len(kg) != len(kb):
        return False
    deg_g = {v: g.degree(v) for v in bg}
    deg_b = {v: base.degree(v) for v in bb}
    nb_b = {v: [e for e in kb if v in e] for v in bb}
    place: dict[int, int] = {}
    used: set[int] = set()

    def fits(v: int) -> bool:
        for e in nb_b[v]:
            o = e[0] if e[1] == v else e[1]
            if o not in place:
                continue
            have = kg.get(_e(place[v], place[o]))
            want = kb[e]
            if have is None or len(have) != len(want) or any(h < w for h, w in zip(have, want)):
                return False
        return True

    def go(i: int) -> bool:
        if i == len(bb):
            return True
        v = bb[i]
        for h in bg:
            if h in used or deg_g[h] != deg_b[v]:
                continue
            place[v] = h
            used.add(h)
            if fits(v) and go(i + 1):
                return True
            del place[v]
            used.discard(h)
        return False

    return go(0)


def gallery_match(g: Graph) -> str | None:
    for name, base, _ in gallery():
        if subdivides(g, base):
            return name
    return None


# ---------------------------------------------------------------------------
# Family dispatch used by the recognizer
# ---------------------------------------------------------------------------


def family_refutation(g: Graph) -> NonBurlingReason | None:
    """A theorem-backed non-membership reason if ``g`` lies in one of the
    families and the family answer is negative."""
    name = gallery_match(g)
    if name is not None:
        return _family_reason(name, "every subdivision")
    k4 = classify_k4_subdivision(g)
    if k4.kind == NON_BURLING:
        return _family_reason("k4-subdivision", k4.condition)
    k5 = classify_k5_subdivision(g)
    if k5.kind != NOT_IN_FAMILY:
        return _family_reason("k5-subdivision", k5.kind)
    nk = parse_necklace(g)
    if nk is not None:
        d = decide_necklace(nk)
        if not d.burling:
            return _family_reason("necklace", d.clause)
    parsed = parse_dumbbell(g)
    if parsed is not None:
        reason = decide_dumbbell(g, parsed[0])
        if reason is not None:
            return reason
    return None


def family_witness(g: Graph) -> tuple[str, DerivationWitness] | None:
    k4 = classify_k4_subdivision(g)
    if k4.is_burling:
        w = k4_witness(g, k4)
        return ("k4-subdivision", w) if w is not None else None
    nk = parse_necklace(g)
    if nk is not None and decide_necklace(nk).burling:
        w = necklace_witness(nk)
        return ("necklace", w) if w is not None else None
    return None


def replay_family_reason(g: Graph, reason: NonBurlingReason) -> bool:
    """Re-derive a family-theorem reason from scratch."""
    if reason.kind != FAMILY_THEOREM:
        return False
    again = family_refutation(g)
    return again is not None and again.evidence == reason.evidence


# ---------------------------------------------------------------------------
# Reporting
# ---------------------------------------------------------------------------

def _covers(theorem: str, h: Graph) -> bool:
    if theorem == "k5-subdivision":
        return classify_k5_subdivision(h).kind != NOT_IN_FAMILY
    if theorem == "subordinate-dumbbell":
        parsed = parse_dumbbell(h)
        return parsed is not None and decide_dumbbell(h, parsed[0]) is not None
    base = {name: g for name, g, _ in gallery()}.get(theorem)
    return base is not None and subdivides(h, base)


COVERING_THEOREMS = ("k5-subdivision", "subordinate-dumbbell", *GALLERY_THEOREMS)


def weakly_pervasive_report(h: Graph, evidence: Sequence[Verdict], theorem: str | None = None) -> dict:
    """Summarise whether ``h`` is shown to be non-weakly-pervasive.

    Only a covering theorem (one stating that no subdivision of ``h`` is
    Burling) supports the claim; sampled verdicts are reported as evidence.
    """
    members = sum(1 for v in evidence if v.is_member)
    non_members = sum(1 for v in evidence if v.is_non_member)
    unknown = len(evidence) - members - non_members
    out: dict[str, Any] = {
        "graph": {"n": h.n, "graph6": to_graph6(h)},
        "sampled": len(evidence),
        "members": members,
        "nonMembers": non_members,
        "unknown": unknown,
    }
    applies = theorem in COVERING_THEOREMS and _covers(theorem, h)
    if applies and members == 0:
        out["claim"] = "non-weakly-pervasive"
        out["basis"] = f"no subdivision is Burling (theorem: {theorem})"
    elif applies:
        out["claim"] = "contradicted"
        out["basis"] = f"theorem {theorem} applies but {members} sampled subdivision(s) are members"
    else:
        out["claim"] = "evidence only - not a proof"
        out["basis"] = "no covering theorem" if theorem is None else f"theorem {theorem} does not cover this graph"
    return out
