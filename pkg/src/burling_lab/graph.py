"""Simple and oriented graphs plus the combinatorial subroutines shared by every
other module: holes, triangles, subdivisions, star cutsets and exact colouring.

Vertices are always the dense integers ``0..n-1``.  Graphs are immutable.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]
Hole = tuple[int, ...]


class GraphParseError(ValueError):
    """Raised for malformed edge-list or graph6 input."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ResourceError(RuntimeError):
    """A configured desk-scale budget was exceeded."""


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Finite simple undirected graph on ``0..n-1``."""

    __slots__ = ("n", "edges", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        es = set()
        adj: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            es.add(_norm(u, v))
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(sorted(es))
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adj)
        self._hash = hash((n, self.edges))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return self.adj[v] | {v}

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled in increasing vertex order.

        Returns the subgraph and the list mapping new labels to old ones.
        """
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        es = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), es), keep

    def remove(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def relabel(self, mapping: Sequence[int]) -> "Graph":
        """Apply a permutation: vertex ``v`` becomes ``mapping[v]``."""
        return Graph(self.n, [(mapping[u], mapping[v]) for u, v in self.edges])

    def components(self, removed: Iterable[int] = ()) -> list[list[int]]:
        gone = set(removed)
        seen = set(gone)
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())


def disjoint_union(*graphs: Graph) -> Graph:
    edges: list[Edge] = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, edges)


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


class OrientedGraph:
    """An orientation of a simple graph: each edge carries one direction."""

    __slots__ = ("underlying", "arcs", "out", "inn")

    def __init__(self, n: int, arcs: Iterable[Sequence[int]] = ()):
        arc_set = {(int(a[0]), int(a[1])) for a in arcs}
        for u, v in arc_set:
            if (v, u) in arc_set:
                raise ValueError(f"edge {{{u}, {v}}} oriented both ways")
        self.underlying = Graph(n, arc_set)
        self.arcs: frozenset[Edge] = frozenset(arc_set)
        out: list[set[int]] = [set() for _ in range(n)]
        inn: list[set[int]] = [set() for _ in range(n)]
        for u, v in arc_set:
            out[u].add(v)
            inn[v].add(u)
        self.out = tuple(frozenset(s) for s in out)
        self.inn = tuple(frozenset(s) for s in inn)

    @property
    def n(self) -> int:
        return self.underlying.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OrientedGraph) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self.n}, arcs={sorted(self.arcs)})"

    def sinks(self) -> list[int]:
        return [v for v in range(self.n) if not self.out[v]]

    def sources(self) -> list[int]:
        return [v for v in range(self.n) if not self.inn[v]]

    def induced(self, vertices: Iterable[int]) -> tuple["OrientedGraph", list[int]]:
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        arcs = [(index[u], index[v]) for u, v in self.arcs if u in index and v in index]
        return OrientedGraph(len(keep), arcs), keep


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    declared: int | None = None
    raw: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        tokens = body.split()
        col = len(body) - len(body.lstrip()) + 1
        if tokens[0] == "n":
            if len(tokens) != 2 or declared is not None or raw:
                raise GraphParseError("header must be a single leading 'n <count>' line", lineno, col)
            declared = _parse_int(tokens[1], body, lineno)
            if declared < 0:
                raise GraphParseError("negative vertex count", lineno, col)
            continue
        if len(tokens) != 2:
            raise GraphParseError(f"expected 'u v', got {len(tokens)} fields", lineno, col)
        u, v = (_parse_int(t, body, lineno) for t in tokens)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno, col)
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex label", lineno, col)
        if declared is not None and max(u, v) >= declared:
            raise GraphParseError(f"vertex {max(u, v)} exceeds declared count {declared}", lineno, col)
        raw.append((u, v))
    if declared is not None:
        return Graph(declared, raw)
    labels = sorted({x for e in raw for x in e})
    index = {x: i for i, x in enumerate(labels)}
    return Graph(len(labels), [(index[u], index[v]) for u, v in raw])


def _parse_int(token: str, line: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"not an integer: {token!r}", lineno, line.find(token) + 1) from None


def to_graph6(g: Graph) -> str:
    if g.n > 62:
        raise ValueError("graph6 encoding here is limited to 62 vertices")
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if g.has_edge(u, v) else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(63 + g.n)]
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = (val << 1) | b
        chars.append(chr(63 + val))
    return "".join(chars)


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise GraphParseError("empty graph6 string")
    for col, ch in enumerate(s, start=1):
        if not 63 <= ord(ch) <= 126:
            raise GraphParseError(f"invalid graph6 character {ch!r}", 1, col)
    n = ord(s[0]) - 63
    if n > 62:
        raise GraphParseError("graph6 strings above 62 vertices are not supported", 1, 1)
    need = (n * (n - 1) // 2 + 5) // 6
    if len(s) - 1 != need:
        raise GraphParseError(f"expected {need} data characters for n={n}, got {len(s) - 1}", 1, len(s))
    bits = []
    for ch in s[1:]:
        val = ord(ch) - 63
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    edges = []
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                edges.append((u, v))
            i += 1
    if any(bits[i:]):
        raise GraphParseError("nonzero padding bits", 1, len(s))
    return Graph(n, edges)


def parse_graph(text: str, format: str = "edge-list") -> Graph:
    if format == "edge-list":
        return from_edge_list(text)
    if format == "graph6":
        return from_graph6(text)
    raise ValueError(f"unknown graph format {format!r}")


def serialize_graph(g: Graph, format: str = "edge-list") -> str:
    if format == "edge-list":
        return to_edge_list(g)
    if format == "graph6":
        return to_graph6(g)
    raise ValueError(f"unknown graph format {format!r}")


# ---------------------------------------------------------------------------
# Holes and triangles
# ---------------------------------------------------------------------------


def iter_holes(g: Graph) -> Iterator[Hole]:
    """Yield every hole once, as ``(s, a, ..., b)`` with ``s`` the least
    vertex and ``a < b`` its two hole-neighbours."""
    adj = g.adj
    for s in range(g.n):
        nbrs = sorted(w for w in adj[s] if w > s)
        blocked = adj[s] | {s}
        for a, b in combinations(nbrs, 2):
            if b in adj[a]:
                continue
            path = [a]
            on_path = {a}
            yield from _close_paths(adj, s, b, blocked, path, on_path)


def _close_paths(adj, s, b, blocked, path, on_path):
    end = path[-1]
    if b in adj[end]:
        # a chordless a-b path must stop as soon as it touches b
        yield (s, *path, b)
        return
    for w in sorted(adj[end]):
        if w <= s or w in on_path or (w in blocked and w != b):
            continue
        if any(w in adj[x] for x in path[:-1]):
            continue
        path.append(w)
        on_path.add(w)
        yield from _close_paths(adj, s, b, blocked, path, on_path)
        path.pop()
        on_path.discard(w)


def holes(g: Graph) -> list[Hole]:
    return list(iter_holes(g))


def is_hole(g: Graph, cycle: Sequence[int]) -> bool:
    k = len(cycle)
    if k < 4 or len(set(cycle)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cycle[i], cycle[j]) != consecutive:
                return False
    return True


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    for u, v in g.edges:
        common = g.adj[u] & g.adj[v]
        if common:
            return tuple(sorted((u, v, min(common))))  # type: ignore[return-value]
    return None


def has_triangle(g: Graph) -> bool:
    return find_triangle(g) is not None


def find_wheel(g: Graph) -> tuple[Hole, int] | None:
    """A hole plus an outside vertex with at least three neighbours on it."""
    for h in iter_holes(g):
        hs = set(h)
        for v in range(g.n):
            if v not in hs and len(g.adj[v] & hs) >= 3:
                return h, v
    return None


# ---------------------------------------------------------------------------
# Subdivisions
# ---------------------------------------------------------------------------


class SubdivisionMap:
    """How a host graph subdivides a pattern.

    ``branch[p]`` is the host vertex for pattern vertex ``p``;
    ``paths[(p, q)]`` (with ``p < q``) is the host path from ``branch[p]``
    to ``branch[q]`` replacing pattern edge ``pq``.
    """

    __slots__ = ("pattern", "branch", "paths")

    def __init__(self, pattern: Graph, branch: tuple[int, ...], paths: dict[Edge, tuple[int, ...]]):
        self.pattern = pattern
        self.branch = branch
        self.paths = paths

    def path_lengths(self) -> dict[Edge, int]:
        return {e: len(p) - 1 for e, p in self.paths.items()}

    def subdivided(self) -> list[Edge]:
        return [e for e, p in self.paths.items() if len(p) > 2]

    def __repr__(self) -> str:
        return f"SubdivisionMap(branch={self.branch}, lengths={self.path_lengths()})"


def threads(g: Graph) -> tuple[list[int], list[tuple[int, ...]]] | None:
    """Split ``g`` into branch vertices (degree >= 3) and the maximal
    degree-2 threads joining them.

    Returns ``None`` when the graph has a vertex of degree <= 1 or a cycle
    made only of degree-2 vertices, since then no branch decomposition
    exists.
    """
    if any(g.degree(v) <= 1 for v in range(g.n)):
        return None
    branch = [v for v in range(g.n) if g.degree(v) >= 3]
    bset = set(branch)
    used: set[Edge] = set()
    out: list[tuple[int, ...]] = []
    for b in branch:
        for w in sorted(g.adj[b]):
            if _norm(b, w) in used:
                continue
            path = [b, w]
            used.add(_norm(b, w))
            while path[-1] not in bset:
                cur = path[-1]
                nxt = next(x for x in g.adj[cur] if x != path[-2])
                used.add(_norm(cur, nxt))
                path.append(nxt)
            out.append(tuple(path))
    if len(used) != g.m:
        return None
    return branch, out


def iter_subdivision_maps(g: Graph, pattern: Graph) -> Iterator[SubdivisionMap]:
    """Every way of reading ``g`` as a subdivision of ``pattern`` (min
    degree >= 3), one per pattern automorphism."""
    if g.n == 0 or pattern.n == 0:
        return
    dec = threads(g)
    if dec is None:
        return
    branch, paths = dec
    if len(branch) != pattern.n or len(paths) != pattern.m:
        return
    by_ends: dict[Edge, tuple[int, ...]] = {}
    for p in paths:
        if p[0] == p[-1]:
            return
        key = _norm(p[0], p[-1])
        if key in by_ends:
            return
        by_ends[key] = p if p[0] < p[-1] else tuple(reversed(p))
    for perm in permutations(branch):
        if all(_norm(perm[u], perm[v]) in by_ends for u, v in pattern.edges):
            mapped = {}
            for u, v in pattern.edges:
                p = by_ends[_norm(perm[u], perm[v])]
                mapped[(u, v)] = p if p[0] == perm[u] else tuple(reversed(p))
            yield SubdivisionMap(pattern, tuple(perm), mapped)


def find_subdivision_of(g: Graph, pattern: Graph) -> SubdivisionMap | None:
    """Recognise ``g`` as a subdivision of ``pattern`` (min degree >= 3)."""
    return next(iter_subdivision_maps(g, pattern), None)


def subdivide_edge(g: Graph, e: Sequence[int], k: int = 1) -> Graph:
    u, v = int(e[0]), int(e[1])
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    if k < 1:
        raise ValueError("k must be at least 1")
    new = list(range(g.n, g.n + k))
    chain = [u, *new, v]
    edges = [x for x in g.edges if x != _norm(u, v)]
    edges.extend(zip(chain, chain[1:]))
    return Graph(g.n + k, edges)


# ---------------------------------------------------------------------------
# Star cutsets
# ---------------------------------------------------------------------------


def star_cutset(g: Graph) -> tuple[int, frozenset[int]] | None:
    """Some ``(v, S)`` with ``v in S`` and ``S`` inside ``N[v]`` whose removal
    leaves at least two components, or ``None``."""
    for v in range(g.n):
        closed = g.closed_neighborhood(v)
        others = [x for x in range(g.n) if x != v]
        for a, b in combinations(others, 2):
            cut = closed - {a, b}
            if len(g.components(cut)) >= 2:
                return v, frozenset(cut)
    return None


def is_star_cutset(g: Graph, center: int, cut: Iterable[int]) -> bool:
    cut = frozenset(cut)
    return center in cut and cut <= g.closed_neighborhood(center) and len(g.components(cut)) >= 2


# ---------------------------------------------------------------------------
# Colouring
# ---------------------------------------------------------------------------


def clique_number(g: Graph, limit: int = 64, node_budget: int = 2_000_000) -> int:
    if g.n > limit:
        raise ResourceError(f"clique number limited to {limit} vertices")
    best = 0 if g.n == 0 else 1
    budget = [node_budget]

    def expand(r: int, cand: set[int]) -> None:
        nonlocal best
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceError("clique search budget exceeded")
        if not cand:
            best = max(best, r)
            return
        if r + len(cand) <= best:
            return
        for v in sorted(cand):
            if r + len(cand) <= best:
                return
            expand(r + 1, cand & g.adj[v])
            cand = cand - {v}

    expand(0, set(range(g.n)))
    return best


def chromatic_number(g: Graph, limit: int = 64, node_budget: int = 2_000_000) -> int:
    """Exact chromatic number by DSATUR branch and bound."""
    if g.n > limit:
        raise ResourceError(f"chromatic number limited to {limit} vertices")
    if g.n == 0:
        return 0
    lower = clique_number(g, limit)
    colours = [-1] * g.n
    best = _greedy_colours(g)
    if best == lower:
        return best
    budget = [node_budget]

    def search(coloured: int, used: int) -> bool:
        nonlocal best
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceError("colouring search budget exceeded")
        if used >= best:
            return False
        if coloured == g.n:
            best = used
            return best == lower
        v = max(
            (x for x in range(g.n) if colours[x] < 0),
            key=lambda x: (len({colours[w] for w in g.adj[x] if colours[w] >= 0}), g.degree(x)),
        )
        forbidden = {colours[w] for w in g.adj[v]}
        for c in range(min(used + 1, best - 1)):
            if c in forbidden:
                continue
            colours[v] = c
            if search(coloured + 1, max(used, c + 1)):
                return True
            colours[v] = -1
        return False

    search(0, 0)
    return best


def _greedy_colours(g: Graph) -> int:
    colours: dict[int, int] = {}
    for v in sorted(range(g.n), key=lambda x: -g.degree(x)):
        taken = {colours[w] for w in g.adj[v] if w in colours}
        c = 0
        while c in taken:
            c += 1
        colours[v] = c
    return max(colours.values()) + 1


def is_k_colourable(g: Graph, k: int) -> bool:
    """Plain exhaustive k-colouring search, kept deliberately naive."""
    colours = [-1] * g.n

    def place(v: int) -> bool:
        if v == g.n:
            return True
        for c in range(k):
            if all(colours[w] != c for w in g.adj[v]):
                colours[v] = c
                if place(v + 1):
                    return True
        colours[v] = -1
        return False

    return place(0)


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def isomorphism(g: Graph, h: Graph) -> dict[int, int] | None:
    """A vertex bijection ``g -> h`` preserving adjacency, or ``None``."""
    if g.n != h.n or g.m != h.m:
        return None
    if sorted(map(len, g.adj)) != sorted(map(len, h.adj)):
        return None
    from networkx.algorithms.isomorphism import GraphMatcher

    gm = GraphMatcher(to_networkx(g), to_networkx(h))
    if gm.is_isomorphic():
        return dict(gm.mapping)
    return None


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return isomorphism(g, h) is not None
