"""Orientation-level structure of derived graphs and the refutation engine.

Holes of an oriented derived graph have exactly two sources (the antennas),
a sink adjacent to both (the pivot) and one more sink (the bottom).  Pairs
and triples of holes that meet in prescribed ways constrain each other's
roles.  :func:`orientation_feasible` searches for an orientation meeting
all of these constraints at once; when none exists the graph cannot be a
derived graph and the search returns a replayable refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .graph import Graph, OrientedGraph, ResourceError, holes as list_holes, is_hole, star_cutset

HOLE_EXTREMA = "hole-extrema"
DOMINO = "domino"
DUMBBELL = "dumbbell"
THETA = "theta"
IN_STAR = "in-star"
ALL_CONSTRAINTS = frozenset({HOLE_EXTREMA, DOMINO, DUMBBELL, THETA, IN_STAR})
CORE_CONSTRAINTS = frozenset({HOLE_EXTREMA, DOMINO, DUMBBELL, THETA})
DEFAULT_MAX_ORIENT_EDGES = 28
DEFAULT_SEARCH_NODES = 400_000
TRACE_LIMIT = 32


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate/reflect a cycle so it starts at its least vertex with the
    smaller neighbour second (the form produced by ``iter_holes``)."""
    k = len(cycle)
    i = min(range(k), key=cycle.__getitem__)
    fwd = tuple(cycle[(i + j) % k] for j in range(k))
    back = tuple(cycle[(i - j) % k] for j in range(k))
    return fwd if fwd[1] < back[1] else back


# ---------------------------------------------------------------------------
# Hole roles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HoleRoles:
    hole: tuple[int, ...]
    antennas: tuple[int, int]
    pivot: int
    bottom: int
    subordinates: frozenset[int]
    transitives: frozenset[int]

    def role(self, v: int) -> str:
        if v == self.pivot:
            return "pivot"
        if v in self.antennas:
            return "antenna"
        return "subordinate"


def _hole_configs(cycle: Sequence[int]) -> list[tuple[int, int, dict[tuple[int, int], bool]]]:
    """Every admissible orientation of a hole, as ``(pivot, bottom, arcs)``
    where ``arcs`` maps each hole edge ``(min, max)`` to True when it points
    from the smaller to the larger endpoint."""
    k = len(cycle)
    out = []
    for p in range(k):
        for b in range(k):
            if b in (p, (p - 1) % k, (p + 1) % k):
                continue
            arcs: dict[tuple[int, int], bool] = {}

            def put(x: int, y: int) -> None:
                arcs[(min(x, y), max(x, y))] = x < y

            put(cycle[(p - 1) % k], cycle[p])
            put(cycle[(p + 1) % k], cycle[p])
            i = (p + 1) % k
            while i != b:
                put(cycle[i], cycle[(i + 1) % k])
                i = (i + 1) % k
            i = (p - 1) % k
            while i != b:
                put(cycle[i], cycle[(i - 1) % k])
                i = (i - 1) % k
            out.append((cycle[p], cycle[b], arcs))
    return out


def _roles_from(cycle: Sequence[int], pivot: int, bottom: int) -> HoleRoles:
    k = len(cycle)
    i = list(cycle).index(pivot)
    ant = tuple(sorted((cycle[(i - 1) % k], cycle[(i + 1) % k])))
    subs = frozenset(cycle) - {pivot, *ant}
    trans = frozenset(subs - {bottom})
    return HoleRoles(canonical_cycle(cycle), ant, pivot, bottom, subs, trans)  # type: ignore[arg-type]


def infer_hole_roles(og: OrientedGraph, hole: Sequence[int]) -> list[HoleRoles]:
    """All role assignments compatible with the orientation of ``hole``.

    Empty when the hole breaks the two-sinks/two-sources law.  A 4-hole
    whose sinks both neighbour both sources yields two assignments, since
    the pivot cannot be told apart from the bottom by orientation alone.
    """
    if not is_hole(og.underlying, hole):
        raise ValueError(f"{list(hole)} is not a hole")
    k = len(hole)
    sinks, sources = [], []
    for i, v in enumerate(hole):
        prev, nxt = hole[(i - 1) % k], hole[(i + 1) % k]
        into = ((prev, v) in og.arcs) + ((nxt, v) in og.arcs)
        if into == 2:
            sinks.append(v)
        elif into == 0:
            sources.append(v)
    if len(sinks) != 2 or len(sources) != 2:
        return []
    out = []
    for p in sinks:
        if all(og.underlying.has_edge(p, s) for s in sources):
            bottom = sinks[1] if p == sinks[0] else sinks[0]
            out.append(_roles_from(hole, p, bottom))
    return out


def hole_law_holds(og: OrientedGraph, hole: Sequence[int]) -> bool:
    return bool(infer_hole_roles(og, hole))


# ---------------------------------------------------------------------------
# In-stars, in-trees, chandeliers, trichotomy
# ---------------------------------------------------------------------------


def full_in_star_cutset_centers(og: OrientedGraph) -> list[int]:
    g = og.underlying
    out = []
    for v in range(g.n):
        cut = {v} | set(og.inn[v])
        if len(g.components(cut)) >= 2:
            out.append(v)
    return out


def is_in_tree(og: OrientedGraph) -> bool:
    g = og.underlying
    if g.n == 0 or not g.is_connected() or g.m != g.n - 1:
        return False
    return len(og.sinks()) == 1 and all(len(og.out[v]) <= 1 for v in range(g.n))


@dataclass(frozen=True)
class ChandelierDecomposition:
    apex: int
    tree_vertices: tuple[int, ...]
    designated_root: int

    def leaves(self, g: Graph) -> list[int]:
        return sorted(g.adj[self.apex])


def chandelier_decompositions(g: Graph) -> list[ChandelierDecomposition]:
    """Every (apex, root) pair making ``g`` a chandelier."""
    out = []
    for apex in range(g.n):
        rest = [v for v in range(g.n) if v != apex]
        t, keep = g.induced(rest)
        if t.n < 3 or not t.is_connected() or t.m != t.n - 1:
            continue
        nbrs = {keep.index(v) for v in g.adj[apex]}
        if len(nbrs) < 2:
            continue
        ones = {v for v in range(t.n) if t.degree(v) == 1}
        if not nbrs <= ones:
            continue
        missing = ones - nbrs
        if len(missing) > 1:
            continue
        if missing:
            roots = [missing.pop()]
        else:
            roots = [v for v in range(t.n) if v not in nbrs]
        for r in roots:
            out.append(ChandelierDecomposition(apex, tuple(keep), keep[r]))
    return out


def chandelier_decomposition(g: Graph) -> ChandelierDecomposition | None:
    found = chandelier_decompositions(g)
    return found[0] if found else None


def is_oriented_chandelier(og: OrientedGraph) -> bool:
    g = og.underlying
    for dec in chandelier_decompositions(g):
        a = dec.apex
        if any((leaf, a) not in og.arcs for leaf in g.adj[a]):
            continue
        t, keep = og.induced(dec.tree_vertices)
        if is_in_tree(t) and keep[t.sinks()[0]] == dec.designated_root:
            return True
    return False


def trichotomy_holds(og: OrientedGraph) -> bool:
    """Full in-star cutset, oriented chandelier, or a vertex of degree <= 1."""
    g = og.underlying
    if g.n == 0 or any(g.degree(v) <= 1 for v in range(g.n)):
        return True
    return bool(full_in_star_cutset_centers(og)) or is_oriented_chandelier(og)


@dataclass(frozen=True)
class TrichotomyRefutation:
    """``vertices`` induce a subgraph with minimum degree >= 2, no star
    cutset and no chandelier decomposition."""

    vertices: tuple[int, ...]
    min_degree: int

    def to_json(self) -> dict:
        return {
            "kind": "trichotomy",
            "subgraph": list(self.vertices),
            "minDegree": self.min_degree,
            "starCutset": None,
            "chandelier": None,
        }


def trichotomy_refute(g: Graph, vertices: Iterable[int] | None = None) -> TrichotomyRefutation | None:
    keep = sorted(set(range(g.n) if vertices is None else vertices))
    h, _ = g.induced(keep)
    if h.n == 0:
        return None
    min_degree = min(h.degree(v) for v in range(h.n))
    if min_degree <= 1 or star_cutset(h) is not None or chandelier_decomposition(h) is not None:
        return None
    return TrichotomyRefutation(tuple(keep), min_degree)


def replay_trichotomy(g: Graph, ref: TrichotomyRefutation) -> bool:
    if any(not 0 <= v < g.n for v in ref.vertices):
        return False
    return trichotomy_refute(g, ref.vertices) is not None


# ---------------------------------------------------------------------------
# Induced hole configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Domino:
    holes: tuple[tuple[int, ...], tuple[int, ...]]
    edge: tuple[int, int]


@dataclass(frozen=True)
class Dumbbell:
    holes: tuple[tuple[int, ...], tuple[int, ...]]
    ends: tuple[int, int]
    path: tuple[int, ...]


@dataclass(frozen=True)
class Theta:
    apexes: tuple[int, int]
    paths: tuple[tuple[int, ...], ...]
    holes: tuple[tuple[int, ...], ...]

    @property
    def is_long(self) -> bool:
        return all(len(p) >= 4 for p in self.paths)


def _induces_only(g: Graph, vertices: set[int], edges: set[tuple[int, int]]) -> bool:
    for u in vertices:
        for w in g.adj[u]:
            if w in vertices and u < w and (u, w) not in edges:
                return False
    return True


def _cycle_edges(c: Sequence[int]) -> set[tuple[int, int]]:
    k = len(c)
    return {(min(c[i], c[(i + 1) % k]), max(c[i], c[(i + 1) % k])) for i in range(k)}


def _shared_segment(h1: Sequence[int], shared: set[int]) -> list[int] | None:
    """The shared vertices as one contiguous run along ``h1``, or None."""
    k = len(h1)
    inside = [v in shared for v in h1]
    if all(inside):
        return None
    start = next(i for i in range(k) if inside[i] and not inside[i - 1])
    run = []
    i = start
    while inside[i % k]:
        run.append(h1[i % k])
        i += 1
    return run if len(run) == len(shared) else None


def find_dominoes_and_thetas(g: Graph, hs: Sequence[tuple[int, ...]]) -> tuple[list[Domino], list[Theta]]:
    dominoes: list[Domino] = []
    thetas: dict[tuple, Theta] = {}
    for h1, h2 in combinations(hs, 2):
        shared = set(h1) & set(h2)
        if len(shared) < 2:
            continue
        seg1 = _shared_segment(h1, shared)
        seg2 = _shared_segment(h2, shared)
        if seg1 is None or seg2 is None:
            continue
        if seg1 != seg2 and seg1 != seg2[::-1]:
            continue
        e1, e2 = _cycle_edges(h1), _cycle_edges(h2)
        if not _induces_only(g, set(h1) | set(h2), e1 | e2):
            continue
        if len(seg1) == 2:
            x, y = sorted(seg1)
            dominoes.append(Domino((h1, h2), (x, y)))
            continue
        u, v = seg1[0], seg1[-1]
        side1 = _side_path(h1, seg1)
        side2 = _side_path(h2, seg1)
        paths = tuple(sorted(_orient_path(p, u, v) for p in (seg1, side1, side2)))
        key = (min(u, v), max(u, v), paths)
        if key in thetas:
            continue
        third = canonical_cycle(list(side1) + list(reversed(side2))[1:-1])
        thetas[key] = Theta((min(u, v), max(u, v)), paths, (h1, h2, third))
    return dominoes, list(thetas.values())


def _side_path(h: Sequence[int], seg: Sequence[int]) -> list[int]:
    """The other u..v path of hole ``h`` given the shared run ``seg``."""
    k = len(h)
    u, v = seg[0], seg[-1]
    inner = set(seg[1:-1])
    i = list(h).index(u)
    for step in (1, -1):
        path = [u]
        j = i
        while True:
            j = (j + step) % k
            path.append(h[j])
            if h[j] == v:
                break
        if not inner & set(path):
            return path
    raise AssertionError("hole does not contain its shared run")


def _orient_path(p: Sequence[int], u: int, v: int) -> tuple[int, ...]:
    p = tuple(p)
    lo = min(u, v)
    return p if p[0] == lo else p[::-1]


def find_dumbbells(g: Graph, hs: Sequence[tuple[int, ...]], max_path: int | None = None) -> list[Dumbbell]:
    """Induced dumbbells, one per (hole, end, hole, end) combination."""
    out: dict[tuple, Dumbbell] = {}
    adj = g.adj
    for h1, h2 in combinations(hs, 2):
        s1, s2 = set(h1), set(h2)
        shared = s1 & s2
        union = s1 | s2
        if len(shared) > 1:
            continue
        if shared:
            x = next(iter(shared))
            extra = any(w in s2 and w != x for u in s1 - {x} for w in adj[u])
            if not extra:
                out.setdefault((h1, x, h2, x), Dumbbell((h1, h2), (x, x), (x,)))
            continue
        between = [(u, w) for u in h1 for w in adj[u] if w in s2]
        if len(between) > 1:
            continue
        if len(between) == 1:
            x, y = between[0]
            out.setdefault((h1, x, h2, y), Dumbbell((h1, h2), (x, y), (x, y)))
            continue
        # connector paths whose interior sees only its two ends
        for x in h1:
            for p1 in sorted(adj[x]):
                if p1 in union or adj[p1] & s1 != {x} or len(adj[p1] & s2) > 1:
                    continue
                for path in _connectors(g, s1, s2, [x, p1], max_path):
                    y = path[-1]
                    out.setdefault((h1, x, h2, y), Dumbbell((h1, h2), (x, y), tuple(path)))
    return list(out.values())


def _connectors(g: Graph, s1: set[int], s2: set[int], path: list[int], max_path: int | None):
    end = path[-1]
    hit = g.adj[end] & s2
    if hit:
        yield path + [next(iter(hit))]
        return
    if max_path is not None and len(path) > max_path:
        return
    for w in sorted(g.adj[end]):
        if w in s1 or w in s2 or w in path:
            continue
        if g.adj[w] & s1 or len(g.adj[w] & s2) > 1:
            continue
        if any(w in g.adj[q] for q in path[1:-1]):
            continue
        yield from _connectors(g, s1, s2, path + [w], max_path)


def pivot_of_theta(og: OrientedGraph, theta: Theta) -> int:
    """The apex that is pivot of all three holes of a long theta.

    Raises :class:`ConstraintViolation` when no apex qualifies.
    """
    choices = []
    for h in theta.holes:
        roles = infer_hole_roles(og, h)
        if not roles:
            raise ConstraintViolation(HOLE_EXTREMA, {"hole": list(h)})
        choices.append({r.pivot for r in roles})
    common = set(theta.apexes) & set.intersection(*choices)
    if not common:
        raise ConstraintViolation(THETA, {"holes": [list(h) for h in theta.holes], "apexes": list(theta.apexes)})
    return min(common)


class ConstraintViolation(ValueError):
    def __init__(self, kind: str, evidence: dict):
        super().__init__(f"{kind} constraint violated: {evidence}")
        self.kind = kind
        self.evidence = evidence


# ---------------------------------------------------------------------------
# Direct constraint checks on a fixed orientation
# ---------------------------------------------------------------------------


def check_orientation(og: OrientedGraph, constraints: Iterable[str] = CORE_CONSTRAINTS, structures=None) -> list[tuple[str, dict]]:
    """Violations of the named constraints by a complete orientation.

    Used as an oracle for the search engine and for property sweeps over
    derived graphs.  ``structures`` may pass precomputed
    ``(holes, dominoes, thetas, dumbbells)``.
    """
    constraints = set(constraints)
    g = og.underlying
    if structures is None:
        hs = list_holes(g)
        dominoes, thetas = find_dominoes_and_thetas(g, hs)
        dumbbells = find_dumbbells(g, hs) if DUMBBELL in constraints else []
    else:
        hs, dominoes, thetas, dumbbells = structures
    roles = {h: infer_hole_roles(og, h) for h in hs}
    out = []
    for h in hs:
        if not roles[h]:
            out.append((HOLE_EXTREMA, {"hole": list(h)}))
    if out:
        return out
    if DOMINO in constraints:
        for d in dominoes:
            h1, h2 = d.holes
            ok = any(
                (r1.pivot == z and r2.role(z) == "subordinate") or (r2.pivot == z and r1.role(z) == "subordinate")
                for z in d.edge
                for r1 in roles[h1]
                for r2 in roles[h2]
            )
            if not ok:
                out.append((DOMINO, {"holes": [list(h1), list(h2)], "edge": list(d.edge)}))
    if DUMBBELL in constraints:
        for db in dumbbells:
            h1, h2 = db.holes
            x1, x2 = db.ends
            ok = any(r1.role(x1) != "subordinate" or r2.role(x2) != "subordinate" for r1 in roles[h1] for r2 in roles[h2])
            if not ok:
                out.append((DUMBBELL, {"holes": [list(h1), list(h2)], "ends": [x1, x2]}))
    if THETA in constraints:
        for th in thetas:
            if not th.is_long:
                continue
            if not any(all(any(r.pivot == w for r in roles[h]) for h in th.holes) for w in th.apexes):
                out.append((THETA, {"holes": [list(h) for h in th.holes], "apexes": list(th.apexes)}))
    if IN_STAR in constraints:
        for sub in in_star_subgraphs(g, hs):
            h, keep = og.induced(sub)
            if not trichotomy_holds(h):
                out.append((IN_STAR, {"subgraph": list(sub)}))
    return out


def in_star_subgraphs(g: Graph, hs: Sequence[tuple[int, ...]], limit: int = 4000) -> list[tuple[int, ...]]:
    """Vertex sets on which the in-star alternative is enforced: the whole
    graph plus unions of two or three holes that pairwise share two or more
    vertices, each kept only if it has minimum degree >= 2 and is not a
    chandelier."""
    cands: set[tuple[int, ...]] = {tuple(range(g.n))}
    sets = [frozenset(h) for h in hs]
    pairs = []
    for i, j in combinations(range(len(sets)), 2):
        if len(sets[i] & sets[j]) >= 2:
            pairs.append((i, j))
            cands.add(tuple(sorted(sets[i] | sets[j])))
    for i, j in pairs:
        for k in range(j + 1, len(sets)):
            if len(sets[i] & sets[k]) >= 2 and len(sets[j] & sets[k]) >= 2:
                cands.add(tuple(sorted(sets[i] | sets[j] | sets[k])))
                if len(cands) > limit:
                    break
    out = []
    for c in sorted(cands, key=lambda c: (len(c), c)):
        h, _ = g.induced(c)
        if h.n == 0 or any(h.degree(v) <= 1 for v in range(h.n)):
            continue
        if chandelier_decomposition(h) is not None:
            continue
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# The search engine
# ---------------------------------------------------------------------------


@dataclass
class OrientationRefutation:
    constraints: tuple[str, ...]
    searched: int
    trace: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"kind": "orientation-unsat", "constraints": list(self.constraints), "searched": self.searched, "trace": self.trace}

    @classmethod
    def from_json(cls, data: dict) -> "OrientationRefutation":
        return cls(tuple(data["constraints"]), int(data["searched"]), list(data.get("trace", [])))


class _Group:
    """A set of admissible edge patterns: the orientations of one hole, or
    the in-star alternatives of one subgraph."""

    __slots__ = ("kind", "key", "fwd", "bwd", "pivot", "antennas", "edges")

    def __init__(self, kind: str, key: tuple, edges: int):
        self.kind = kind
        self.key = key
        self.fwd: list[int] = []
        self.bwd: list[int] = []
        self.pivot: list[int] = []
        self.antennas: list[frozenset] = []
        self.edges = edges


class _Engine:
    def __init__(self, g: Graph, constraints: Iterable[str], node_budget: int):
        self.g = g
        self.constraints = tuple(sorted(set(constraints) | {HOLE_EXTREMA}))
        self.node_budget = node_budget
        self.index = {e: i for i, e in enumerate(g.edges)}
        self.hs = list_holes(g)
        self.groups: list[_Group] = []
        self.hole_group: dict[tuple[int, ...], int] = {}
        for h in self.hs:
            self.hole_group[h] = len(self.groups)
            self.groups.append(self._hole_group(h))
        want = set(self.constraints)
        self.dominoes: list[Domino] = []
        self.thetas: list[Theta] = []
        self.dumbbells: list[Dumbbell] = []
        if want & {DOMINO, THETA}:
            self.dominoes, thetas = find_dominoes_and_thetas(g, self.hs)
            self.thetas = [t for t in thetas if t.is_long]
        if DUMBBELL in want:
            self.dumbbells = find_dumbbells(g, self.hs)
        self.roles: list[tuple[str, dict, list[list[tuple[int, int]]]]] = []
        if DOMINO in want:
            for d in self.dominoes:
                self.roles.append(self._domino(d))
        if DUMBBELL in want:
            for d in self.dumbbells:
                self.roles.append(self._dumbbell(d))
        if THETA in want:
            for t in self.thetas:
                self.roles.append(self._theta(t))
        self.star_groups: list[int] = []
        if IN_STAR in want:
            for sub in in_star_subgraphs(g, self.hs):
                self.star_groups.append(len(self.groups))
                self.groups.append(self._star_group(sub))
        self.ambiguous = [
            gi for gi, grp in enumerate(self.groups) if grp.kind == "hole" and len(grp.key) == 4 and self._in_roles(gi)
        ]

    # -- construction ------------------------------------------------------

    def _bits(self, arcs: dict[tuple[int, int], bool]) -> tuple[int, int]:
        fwd = bwd = 0
        for e, forward in arcs.items():
            bit = 1 << self.index[e]
            if forward:
                fwd |= bit
            else:
                bwd |= bit
        return fwd, bwd

    def _hole_group(self, h: tuple[int, ...]) -> _Group:
        grp = _Group("hole", h, 0)
        for pivot, bottom, arcs in _hole_configs(h):
            fwd, bwd = self._bits(arcs)
            grp.fwd.append(fwd)
            grp.bwd.append(bwd)
            grp.pivot.append(pivot)
            k = len(h)
            i = h.index(pivot)
            grp.antennas.append(frozenset((h[(i - 1) % k], h[(i + 1) % k])))
            grp.edges |= fwd | bwd
        return grp

    def _star_group(self, sub: tuple[int, ...]) -> _Group:
        h, keep = self.g.induced(sub)
        grp = _Group("in-star", sub, 0)
        seen = set()
        for v in range(h.n):
            nbrs = sorted(h.adj[v])
            for r in range(len(nbrs) + 1):
                for ins in combinations(nbrs, r):
                    if len(h.components({v, *ins})) < 2:
                        continue
                    arcs = {}
                    for w in nbrs:
                        a, b = keep[w], keep[v]
                        if w not in ins:
                            a, b = b, a
                        arcs[(min(a, b), max(a, b))] = a < b
                    fwd, bwd = self._bits(arcs)
                    if (fwd, bwd) in seen:
                        continue
                    seen.add((fwd, bwd))
                    grp.fwd.append(fwd)
                    grp.bwd.append(bwd)
                    grp.pivot.append(-1)
                    grp.antennas.append(frozenset())
                    grp.edges |= fwd | bwd
        return grp

    def _subset(self, gi: int, pred) -> int:
        grp = self.groups[gi]
        mask = 0
        for c in range(len(grp.fwd)):
            if pred(grp.pivot[c], grp.antennas[c]):
                mask |= 1 << c
        return mask

    def _domino(self, d: Domino):
        g1, g2 = (self.hole_group[h] for h in d.holes)
        alts = []
        for z in d.edge:
            piv1 = self._subset(g1, lambda p, a, z=z: p == z)
            piv2 = self._subset(g2, lambda p, a, z=z: p == z)
            sub1 = self._subset(g1, lambda p, a, z=z: p != z and z not in a)
            sub2 = self._subset(g2, lambda p, a, z=z: p != z and z not in a)
            alts.append([(g1, piv1), (g2, sub2)])
            alts.append([(g2, piv2), (g1, sub1)])
        ev = {"holes": [list(h) for h in d.holes], "edge": list(d.edge)}
        return (DOMINO, ev, alts)

    def _dumbbell(self, d: Dumbbell):
        g1, g2 = (self.hole_group[h] for h in d.holes)
        x1, x2 = d.ends
        not1 = self._subset(g1, lambda p, a: p == x1 or x1 in a)
        not2 = self._subset(g2, lambda p, a: p == x2 or x2 in a)
        ev = {"holes": [list(h) for h in d.holes], "ends": [x1, x2], "path": list(d.path)}
        return (DUMBBELL, ev, [[(g1, not1)], [(g2, not2)]])

    def _theta(self, t: Theta):
        gis = [self.hole_group[h] for h in t.holes]
        alts = []
        for w in t.apexes:
            alts.append([(gi, self._subset(gi, lambda p, a, w=w: p == w)) for gi in gis])
        ev = {"holes": [list(h) for h in t.holes], "apexes": list(t.apexes)}
        return (THETA, ev, alts)

    def _in_roles(self, gi: int) -> bool:
        return any(gi == x for _, _, alts in self.roles for alt in alts for x, _ in alt)

    # -- propagation -------------------------------------------------------

    def alive(self, gi: int, F: int, B: int, chosen: dict[int, int]) -> int:
        grp = self.groups[gi]
        mask = 0
        want = chosen.get(gi)
        for c in range(len(grp.fwd)):
            if grp.fwd[c] & B or grp.bwd[c] & F:
                continue
            if want is not None and grp.pivot[c] != want:
                continue
            mask |= 1 << c
        return mask

    def _meet(self, gi: int, mask: int) -> tuple[int, int]:
        grp = self.groups[gi]
        fwd = bwd = -1
        c = 0
        while mask:
            if mask & 1:
                fwd &= grp.fwd[c]
                bwd &= grp.bwd[c]
            mask >>= 1
            c += 1
        return fwd, bwd

    def propagate(self, F: int, B: int, chosen: dict[int, int]):
        """Close ``(F, B)`` under forced arcs.

        Returns ``(state, None)`` or ``(None, violation)``; a violation
        carries the arcs known at the moment it was found, so it can be
        replayed against its own constraint alone.
        """
        while True:
            changed = False
            for gi in range(len(self.groups)):
                a = self.alive(gi, F, B, chosen)
                if not a:
                    return None, (self._violation_group(gi), F, B)
                f, b = self._meet(gi, a)
                if f & ~F or b & ~B:
                    F |= f
                    B |= b
                    changed = True
            for kind, ev, alts in self.roles:
                cache: dict[int, int] = {}
                fwd = bwd = -1
                live = False
                for alt in alts:
                    af = ab = 0
                    ok = True
                    for gi, sub in alt:
                        if gi not in cache:
                            cache[gi] = self.alive(gi, F, B, chosen)
                        m = cache[gi] & sub
                        if not m:
                            ok = False
                            break
                        f, b = self._meet(gi, m)
                        af |= f
                        ab |= b
                    if ok:
                        live = True
                        fwd &= af
                        bwd &= ab
                if not live:
                    return None, ({"violation": kind, **ev}, F, B)
                if fwd != -1 and (fwd & ~F or bwd & ~B):
                    F |= fwd
                    B |= bwd
                    changed = True
            if not changed:
                alive = [self.alive(gi, F, B, chosen) for gi in range(len(self.groups))]
                return (F, B, alive), None

    def _violation_group(self, gi: int) -> dict:
        grp = self.groups[gi]
        if grp.kind == "hole":
            return {"violation": HOLE_EXTREMA, "hole": list(grp.key)}
        return {"violation": IN_STAR, "subgraph": list(grp.key)}

    def partial(self, F: int, B: int) -> list[list[int]]:
        out = []
        for (u, v), i in self.index.items():
            if F >> i & 1:
                out.append([u, v])
            elif B >> i & 1:
                out.append([v, u])
        return out

    # -- search ------------------------------------------------------------

    def order(self) -> list[int]:
        count = [0] * self.g.m
        for grp in self.groups:
            if grp.kind != "hole":
                continue
            e = grp.edges
            i = 0
            while e:
                if e & 1:
                    count[i] += 1
                e >>= 1
                i += 1
        return sorted(range(self.g.m), key=lambda i: (-count[i], i))

    def solve(self):
        order = self.order()
        trace: list[dict] = []
        searched = 0
        stack = [(0, 0, {})]
        while stack:
            F, B, chosen = stack.pop()
            searched += 1
            if searched > self.node_budget:
                raise ResourceError(f"orientation search exceeded {self.node_budget} nodes")
            state, bad = self.propagate(F, B, chosen)
            if state is None:
                if len(trace) < TRACE_LIMIT:
                    entry = dict(bad[0])
                    entry["partial"] = self.partial(bad[1], bad[2])
                    if chosen:
                        entry["pivots"] = {",".join(map(str, self.groups[gi].key)): p for gi, p in sorted(chosen.items())}
                    trace.append(entry)
                continue
            F, B, alive = state
            free = next((i for i in order if not (F | B) >> i & 1), None)
            if free is not None:
                bit = 1 << free
                stack.append((F, B | bit, chosen))
                stack.append((F | bit, B, chosen))
                continue
            pending = None
            for gi in self.ambiguous:
                if gi in chosen:
                    continue
                pivots = sorted({self.groups[gi].pivot[c] for c in _bits_of(alive[gi])})
                if len(pivots) > 1:
                    pending = (gi, pivots)
                    break
            if pending is None:
                arcs = [tuple(a) for a in self.partial(F, B)]
                return OrientedGraph(self.g.n, arcs), searched, trace
            gi, pivots = pending
            for p in reversed(pivots):
                stack.append((F, B, {**chosen, gi: p}))
        return None, searched, trace


def _bits_of(mask: int) -> list[int]:
    out = []
    c = 0
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return out


def orientation_feasible(
    g: Graph,
    constraints: Iterable[str] = ALL_CONSTRAINTS,
    max_edges: int = DEFAULT_MAX_ORIENT_EDGES,
    node_budget: int = DEFAULT_SEARCH_NODES,
) -> OrientedGraph | OrientationRefutation:
    """An orientation satisfying every named constraint, or a refutation.

    The hole law is always enforced since the role constraints are phrased
    in terms of the roles it defines.
    """
    if g.m > max_edges:
        raise ResourceError(f"orientation search is limited to {max_edges} edges (graph has {g.m})")
    engine = _Engine(g, constraints, node_budget)
    found, searched, trace = engine.solve()
    if found is not None:
        return found
    return OrientationRefutation(engine.constraints, searched, trace)


def replay_trace_entry(g: Graph, entry: dict, constraints: Iterable[str] = ALL_CONSTRAINTS) -> bool:
    """Check that the recorded partial orientation really leaves the named
    constraint unsatisfiable."""
    try:
        arcs = [(int(a), int(b)) for a, b in entry["partial"]]
    except (KeyError, TypeError, ValueError):
        return False
    index = {e: i for i, e in enumerate(g.edges)}
    F = B = 0
    for a, b in arcs:
        e = (min(a, b), max(a, b))
        if e not in index:
            return False
        if a < b:
            F |= 1 << index[e]
        else:
            B |= 1 << index[e]
    if F & B:
        return False
    kind = entry.get("violation")
    engine = _ReplayEngine(g, index)
    chosen = {}
    for key, p in entry.get("pivots", {}).items():
        h = tuple(int(x) for x in key.split(","))
        if not is_hole(g, h):
            return False
        chosen[engine.add_hole(h)] = int(p)
    try:
        if kind == HOLE_EXTREMA:
            h = canonical_cycle([int(x) for x in entry["hole"]])
            if not is_hole(g, h):
                return False
            gi = engine.add_hole(h)
            return engine.alive(gi, F, B, chosen) == 0
        if kind == IN_STAR:
            sub = tuple(sorted(int(x) for x in entry["subgraph"]))
            h, _ = g.induced(sub)
            if h.n == 0 or any(h.degree(v) <= 1 for v in range(h.n)) or chandelier_decomposition(h) is not None:
                return False
            gi = len(engine.groups)
            engine.groups.append(engine._star_group(sub))
            return engine.alive(gi, F, B, chosen) == 0
        holes_ = [canonical_cycle([int(x) for x in h]) for h in entry["holes"]]
        if not all(is_hole(g, h) for h in holes_):
            return False
        for h in holes_:
            engine.add_hole(h)
        if kind == DOMINO:
            x, y = (int(v) for v in entry["edge"])
            rec = engine._domino(Domino(tuple(holes_), (x, y)))  # type: ignore[arg-type]
            dominoes, _ = find_dominoes_and_thetas(g, holes_)
            if not any(d.edge == (min(x, y), max(x, y)) for d in dominoes):
                return False
        elif kind == DUMBBELL:
            x1, x2 = (int(v) for v in entry["ends"])
            found = find_dumbbells(g, holes_)
            if not any(d.ends == (x1, x2) for d in found):
                return False
            rec = engine._dumbbell(Dumbbell(tuple(holes_), (x1, x2), ()))  # type: ignore[arg-type]
        elif kind == THETA:
            ap = tuple(int(v) for v in entry["apexes"])
            _, thetas = find_dominoes_and_thetas(g, holes_[:2])
            if not any(t.is_long and set(t.apexes) == set(ap) for t in thetas):
                return False
            rec = engine._theta(Theta(ap, (), tuple(holes_)))  # type: ignore[arg-type]
        else:
            return False
    except (KeyError, TypeError, ValueError):
        return False
    _, _, alts = rec
    alive = {gi: engine.alive(gi, F, B, chosen) for gi in range(len(engine.groups))}
    return not any(all(alive[gi] & sub for gi, sub in alt) for alt in alts)


class _ReplayEngine(_Engine):
    """Just enough of the engine to rebuild named groups."""

    def __init__(self, g: Graph, index: dict):
        self.g = g
        self.index = index
        self.groups = []
        self.hole_group = {}
        self.roles = []

    def add_hole(self, h: tuple[int, ...]) -> int:
        if h not in self.hole_group:
            self.hole_group[h] = len(self.groups)
            self.groups.append(self._hole_group(h))
        return self.hole_group[h]


def verify_refutation(g: Graph, ref: OrientationRefutation, max_edges: int = DEFAULT_MAX_ORIENT_EDGES) -> bool:
    """Replay every trace entry, then rerun the deterministic search."""
    if not set(ref.constraints) <= ALL_CONSTRAINTS:
        return False
    if not all(replay_trace_entry(g, e, ref.constraints) for e in ref.trace):
        return False
    try:
        again = orientation_feasible(g, ref.constraints, max_edges=max(max_edges, g.m))
    except ResourceError:
        return False
    return isinstance(again, OrientationRefutation) and again.searched == ref.searched
