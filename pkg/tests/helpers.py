"""Graph builders and brute-force oracles shared by the tests."""

from __future__ import annotations

from functools import cache
from itertools import combinations, permutations, product

import networkx as nx

from burling_lab.graph import Graph, OrientedGraph, has_triangle
from burling_lab.structure import check_orientation
from burling_lab.tree import DerivationWitness, classify_arcs, contract_arc, derive, enumerate_trees, subdivide_bottom_arc, top_subdivide


def from_nx(h: nx.Graph) -> Graph:
    idx = {v: i for i, v in enumerate(sorted(h.nodes))}
    return Graph(len(idx), [(idx[u], idx[v]) for u, v in h.edges])


def atlas(max_vertices: int = 7, triangle_free: bool = True) -> list[Graph]:
    """Every graph on at most ``max_vertices`` vertices up to isomorphism
    (the networkx atlas stops at 7)."""
    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() > max_vertices:
            break
        g = Graph(h.number_of_nodes(), list(h.edges()))
        if not triangle_free or not has_triangle(g):
            out.append(g)
    return out


def wheel(k: int, spokes) -> Graph:
    """The hole 0..k-1 plus a centre ``k`` adjacent to ``spokes``."""
    return Graph(k + 1, [(i, (i + 1) % k) for i in range(k)] + [(k, s) for s in spokes])


def k5_subdivision(kept_ring) -> Graph:
    """K5 whose edges along ``kept_ring`` stay and all others get one new
    vertex."""
    ring = {tuple(sorted((kept_ring[i], kept_ring[(i + 1) % len(kept_ring)]))) for i in range(len(kept_ring))}
    edges, n = [], 5
    for u, v in combinations(range(5), 2):
        if (u, v) in ring:
            edges.append((u, v))
        else:
            edges += [(u, n), (n, v)]
            n += 1
    return Graph(n, edges)


def brute_orientable(g: Graph, constraints) -> bool:
    for bits in product((0, 1), repeat=g.m):
        og = OrientedGraph(g.n, [(u, v) if b else (v, u) for (u, v), b in zip(g.edges, bits)])
        if not check_orientation(og, constraints):
            return True
    return False


def brute_holes(g: Graph) -> set[frozenset]:
    """Vertex sets of chordless cycles of length >= 4, by subset search."""
    out = set()
    for k in range(4, g.n + 1):
        for sub in combinations(range(g.n), k):
            h, _ = g.induced(sub)
            if h.m == k and all(h.degree(v) == 2 for v in range(k)) and h.is_connected():
                out.add(frozenset(sub))
    return out


def brute_chromatic(g: Graph) -> int:
    for k in range(0, g.n + 1):
        for col in product(range(k), repeat=g.n):
            if all(col[u] != col[v] for u, v in g.edges):
                return k
    return g.n


def brute_clique(g: Graph) -> int:
    best = 0
    for k in range(1, g.n + 1):
        for sub in combinations(range(g.n), k):
            if all(g.has_edge(u, v) for u, v in combinations(sub, 2)):
                best = k
    return best


def brute_star_cutset(g: Graph) -> bool:
    """Some S with v in S within N[v] whose removal disconnects g."""
    for v in range(g.n):
        nb = sorted(g.adj[v])
        for r in range(len(nb) + 1):
            for extra in combinations(nb, r):
                cut = {v, *extra}
                if len(g.components(cut)) >= 2:
                    return True
    return False


# ---------------------------------------------------------------------------
# Burling trees by direct generate-and-validate
# ---------------------------------------------------------------------------


def _labelled_trees(k: int):
    """Parent arrays of rooted trees on 0..k-1 with root 0."""
    if k == 1:
        yield (-1,)
        return
    for parents in product(range(k), repeat=k - 1):
        parent = (-1, *parents)
        ok = True
        for v in range(1, k):
            seen, x = set(), v
            while x != 0:
                if x in seen or parent[x] == x:
                    ok = False
                    break
                seen.add(x)
                x = parent[x]
            if not ok:
                break
        if ok:
            yield parent


def _branches(kids, start):
    """Descending paths from ``start``."""
    out = [(start,)]
    for c in kids[start]:
        out += [(start, *b) for b in _branches(kids, c)]
    return out


def brute_trees(k: int):
    """Every Burling tree on exactly k nodes with root 0, as
    (parent, lastBorn, choose) tuples, straight from the definition."""
    for parent in _labelled_trees(k):
        kids = [[v for v in range(k) if parent[v] == u] for u in range(k)]
        internal = [u for u in range(k) if kids[u]]
        for lbs in product(*[kids[u] for u in internal]):
            lb = [-1] * k
            for u, c in zip(internal, lbs):
                lb[u] = c
            eligible = [v for v in range(1, k) if v not in lbs]
            options = [[()] + _branches(kids, lb[parent[v]]) for v in eligible]
            for paths in product(*options):
                choose = [()] * k
                for v, p in zip(eligible, paths):
                    choose[v] = p
                yield tuple(parent), tuple(lb), tuple(choose)


def brute_canonical(parent, lb, choose) -> tuple:
    """Least relabelling fixing the root."""
    k = len(parent)
    best = None
    for perm in permutations(range(1, k)):
        p = (0, *perm)
        par = [0] * k
        l = [0] * k
        ch = [()] * k
        for v in range(k):
            par[p[v]] = p[parent[v]] if parent[v] >= 0 else -1
            l[p[v]] = p[lb[v]] if lb[v] >= 0 else -1
            ch[p[v]] = tuple(p[x] for x in choose[v])
        key = (tuple(par), tuple(l), tuple(ch))
        if best is None or key < best:
            best = key
    return best


def brute_tree_count(k: int) -> int:
    return len({brute_canonical(*t) for t in brute_trees(k)})


@cache
def _trees_6():
    return list(enumerate_trees(6))


def _applicable(w):
    og = w.oriented()
    labels = classify_arcs(w.tree, w.selected)
    sources = set(og.sources())
    out = []
    for (a, b), lab in labels.items():
        u, v = w.mapping[a], w.mapping[b]
        if "bottom" in lab:
            out.append(("bottom", (u, v)))
        if "top" in lab and u in sources:
            out.append(("top", (u, v)))
        if og.out[u] == {v} and og.inn[v] == {u}:
            out.append(("contract", (u, v)))
    return out


def random_transforms(w, rng, steps=4):
    for _ in range(steps):
        moves = _applicable(w)
        if not moves:
            break
        kind, arc = rng.choice(moves)
        k = rng.randint(1, 2)
        if kind == "bottom":
            w = subdivide_bottom_arc(w, arc, k)
        elif kind == "top":
            w = top_subdivide(w, arc, k)
        else:
            w = contract_arc(w, arc)
    return w


def random_witness(rng):
    t = rng.choice(_trees_6())
    sel = [v for v in range(t.size) if rng.random() < 0.8] or [t.root]
    og, keep = derive(t, sel)
    return DerivationWitness(t, tuple(keep), {x: i for i, x in enumerate(keep)})
