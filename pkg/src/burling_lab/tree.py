"""Burling trees, derivation, exhaustive enumeration and witnesses.

A Burling tree is a rooted tree in which every internal node designates one
child as its *last-born*, and every non-last-born, non-root node ``u`` owns a
(possibly empty) descending branch starting at the last-born of its parent.
The fully derived oriented graph has an arc ``u -> v`` exactly when ``v`` lies
on the branch owned by ``u``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .graph import Graph, OrientedGraph, ResourceError

DEFAULT_MAX_NODES = 9


class InvalidTreeError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid Burling tree: " + "; ".join(violations))
        self.violations = violations


class ContractViolation(ValueError):
    """A witness transform was applied outside its precondition."""


@dataclass(frozen=True)
class BurlingTree:
    """Nodes are ``0..size-1``.  ``parent[root] == -1``; ``last_born[v] == -1``
    for leaves; ``choose[v]`` is the branch owned by ``v``."""

    root: int
    parent: tuple[int, ...]
    last_born: tuple[int, ...]
    choose: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in range(self.size)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return kids

    def depths(self) -> list[int]:
        depth = [-1] * self.size
        for v in range(self.size):
            chain = []
            x = v
            while x >= 0 and depth[x] < 0 and len(chain) <= self.size:
                chain.append(x)
                x = self.parent[x]
            base = depth[x] if x >= 0 else -1
            for y in reversed(chain):
                base += 1
                depth[y] = base
        return depth

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "parent": {str(v): p for v, p in enumerate(self.parent) if p >= 0},
            "lastBorn": {str(v): c for v, c in enumerate(self.last_born) if c >= 0},
            "choosePath": {str(v): list(c) for v, c in enumerate(self.choose) if c},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BurlingTree":
        parent_map = {int(k): int(v) for k, v in data.get("parent", {}).items()}
        lb_map = {int(k): int(v) for k, v in data.get("lastBorn", {}).items()}
        ch_map = {int(k): tuple(int(x) for x in v) for k, v in data.get("choosePath", {}).items()}
        root = int(data["root"])
        ids = {root, *parent_map, *parent_map.values(), *lb_map, *lb_map.values(), *ch_map}
        for path in ch_map.values():
            ids.update(path)
        size = max(ids) + 1
        return cls(
            root=root,
            parent=tuple(parent_map.get(v, -1) for v in range(size)),
            last_born=tuple(lb_map.get(v, -1) for v in range(size)),
            choose=tuple(ch_map.get(v, ()) for v in range(size)),
        )


def single_node_tree() -> BurlingTree:
    return BurlingTree(0, (-1,), (-1,), ((),))


def validate_tree(t: BurlingTree) -> list[str]:
    """Every broken clause of the definition, as readable strings."""
    out: list[str] = []
    m = t.size
    if not (len(t.last_born) == len(t.choose) == m):
        return ["parent, lastBorn and choosePath tables differ in length"]
    if not 0 <= t.root < m:
        return [f"root {t.root} is not a node"]
    if t.parent[t.root] != -1:
        out.append(f"node {t.root}: root has a parent")
    for v in range(m):
        p = t.parent[v]
        if v != t.root and not 0 <= p < m:
            out.append(f"node {v}: missing or invalid parent")
    if out:
        return out
    # every node must reach the root without revisiting
    for v in range(m):
        seen = set()
        x = v
        while x != t.root:
            if x in seen:
                out.append(f"node {v}: parent links contain a cycle")
                break
            seen.add(x)
            x = t.parent[x]
    if out:
        return out
    kids = t.children()
    for v in range(m):
        lb = t.last_born[v]
        if kids[v]:
            if lb not in kids[v]:
                out.append(f"node {v}: lastBorn must be one of its children (clause ii)")
        elif lb != -1:
            out.append(f"node {v}: a leaf has no lastBorn (clause ii)")
    is_lb = {t.last_born[v] for v in range(m) if t.last_born[v] >= 0}
    for v in range(m):
        path = t.choose[v]
        if v == t.root or v in is_lb:
            if path:
                out.append(f"node {v}: root and last-born nodes have an empty choose path (clause iii)")
            continue
        if not path:
            continue
        start = t.last_born[t.parent[v]]
        if path[0] != start:
            out.append(f"node {v}: choose path must start at lastBorn(parent) = {start} (clause iii)")
            continue
        for a, b in zip(path, path[1:]):
            if not (0 <= b < m) or t.parent[b] != a:
                out.append(f"node {v}: choose path is not a descending branch at {a}->{b} (clause iii)")
                break
    return out


def fully_derive(t: BurlingTree) -> OrientedGraph:
    violations = validate_tree(t)
    if violations:
        raise InvalidTreeError(violations)
    return OrientedGraph(t.size, [(u, v) for u in range(t.size) for v in t.choose[u]])


def derive(t: BurlingTree, selected: Iterable[int]) -> tuple[OrientedGraph, list[int]]:
    """Oriented graph induced on ``selected`` (relabelled in increasing node
    order) along with the list mapping new labels back to tree nodes."""
    chosen = sorted(set(selected))
    for v in chosen:
        if not 0 <= v < t.size:
            raise ValueError(f"unknown tree node {v}")
    violations = validate_tree(t)
    if violations:
        raise InvalidTreeError(violations)
    index = {v: i for i, v in enumerate(chosen)}
    arcs = [(index[u], index[v]) for u in chosen for v in t.choose[u] if v in index]
    return OrientedGraph(len(chosen), arcs), chosen


def classify_arcs(t: BurlingTree, selected: Iterable[int]) -> dict[tuple[int, int], str]:
    """Label arcs (in tree-node ids) as ``top``, ``bottom``, ``top+bottom`` or
    ``middle`` according to the depth of their heads."""
    sel = set(selected)
    depth = t.depths()
    labels: dict[tuple[int, int], str] = {}
    for u in sel:
        heads = [v for v in t.choose[u] if v in sel]
        if not heads:
            continue
        top = min(heads, key=depth.__getitem__)
        bottom = max(heads, key=depth.__getitem__)
        for v in heads:
            if v == top and v == bottom:
                labels[(u, v)] = "top+bottom"
            elif v == top:
                labels[(u, v)] = "top"
            elif v == bottom:
                labels[(u, v)] = "bottom"
            else:
                labels[(u, v)] = "middle"
    return labels


# ---------------------------------------------------------------------------
# Canonical form and enumeration
# ---------------------------------------------------------------------------


def canonical_key(t: BurlingTree) -> tuple:
    """Isomorphism-invariant encoding of a valid Burling tree.

    Each branch is recorded as a mark on its end node, labelled with the
    branch length (which fixes the owner's parent among the end's
    ancestors) and the owner's own encoding; marks then travel with the
    subtree encoding so automorphic siblings cannot be told apart.
    """
    kids = t.children()
    marks: dict[int, list] = {}

    def enc(x: int) -> tuple:
        lb = t.last_born[x]
        items = []
        owned = []
        for c in kids[x]:
            if c == lb:
                continue
            ec = enc(c)
            items.append((ec, bool(t.choose[c])))
            if t.choose[c]:
                owned.append((t.choose[c][-1], (len(t.choose[c]), ec)))
        for end, ec in owned:
            marks.setdefault(end, []).append(ec)
        lb_enc = enc(lb) if lb >= 0 else ()
        for end, _ in owned:
            marks[end].pop()
        return (tuple(sorted(marks.get(x, ()))), tuple(sorted(items)), lb_enc)

    return enc(t.root)


_LEAF = ((), ())


def _shapes_by_size(k: int, memo: dict[int, list]) -> list:
    if k in memo:
        return memo[k]
    if k == 1:
        memo[1] = [_LEAF]
        return memo[1]
    out = []
    for lb_size in range(1, k):
        for lb in _shapes_by_size(lb_size, memo):
            for others in _multisets(k - 1 - lb_size, memo):
                out.append((others, lb))
    memo[k] = out
    return out


def _multisets(total: int, memo: dict[int, list], floor: tuple = (0, -1)) -> list[tuple]:
    """Non-decreasing tuples of shapes whose sizes sum to ``total``."""
    if total == 0:
        return [()]
    out = []
    min_size, min_idx = floor
    for size in range(max(min_size, 1), total + 1):
        shapes = _shapes_by_size(size, memo)
        for idx, sh in enumerate(shapes):
            if size == min_size and idx < min_idx:
                continue
            for rest in _multisets(total - size, memo, (size, idx)):
                out.append((sh, *rest))
    return out


def _materialize(shape) -> tuple[list[int], list[int], list[list[int]]]:
    parent: list[int] = []
    last_born: list[int] = []
    kids: list[list[int]] = []

    def build(sh, par: int) -> int:
        v = len(parent)
        parent.append(par)
        last_born.append(-1)
        kids.append([])
        others, lb = sh
        for c in others:
            kids[v].append(build(c, v))
        if lb:
            w = build(lb, v)
            kids[v].append(w)
            last_born[v] = w
        return v

    build(shape, -1)
    return parent, last_born, kids


def _has_symmetry(shape) -> bool:
    others, lb = shape
    if len(set(others)) != len(others):
        return True
    return any(_has_symmetry(c) for c in others) or (bool(lb) and _has_symmetry(lb))


def enumerate_trees(max_nodes: int, cap: int = DEFAULT_MAX_NODES, min_nodes: int = 1) -> Iterator[BurlingTree]:
    """Every Burling tree with ``min_nodes..max_nodes`` nodes, once per
    isomorphism class, in a fixed order (by size, then shape)."""
    if max_nodes > cap:
        raise ResourceError(f"tree enumeration is capped at {cap} nodes (asked for {max_nodes})")
    memo: dict[int, list] = {}
    for k in range(max(1, min_nodes), max_nodes + 1):
        for shape in _shapes_by_size(k, memo):
            yield from _trees_of_shape(shape)


def _trees_of_shape(shape) -> Iterator[BurlingTree]:
    parent, last_born, kids = _materialize(shape)
    m = len(parent)
    proper = [v for v in range(1, m) if last_born[parent[v]] != v]
    options = []
    for v in proper:
        start = last_born[parent[v]]
        opts: list[tuple[int, ...]] = [()]
        stack = [(start,)]
        while stack:
            path = stack.pop()
            opts.append(path)
            for c in reversed(kids[path[-1]]):
                stack.append(path + (c,))
        options.append(opts)
    seen: set | None = set() if _has_symmetry(shape) else None
    par, lbs = tuple(parent), tuple(last_born)
    for combo in product(*options):
        choose = [()] * m
        for v, path in zip(proper, combo):
            choose[v] = path
        t = BurlingTree(0, par, lbs, tuple(choose))
        if seen is not None:
            key = canonical_key(t)
            if key in seen:
                continue
            seen.add(key)
        yield t


def count_trees(max_nodes: int, cap: int = DEFAULT_MAX_NODES) -> int:
    return sum(1 for _ in enumerate_trees(max_nodes, cap))


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DerivationWitness:
    """``mapping[node]`` is the target-graph vertex represented by a selected
    tree node; unselected nodes are shadows."""

    tree: BurlingTree
    selected: tuple[int, ...]
    mapping: dict[int, int] = field(hash=False)

    def oriented(self) -> OrientedGraph:
        """The derived orientation on the target graph's labels."""
        sel = set(self.selected)
        arcs = [(self.mapping[u], self.mapping[v]) for u in self.selected for v in self.tree.choose[u] if v in sel]
        return OrientedGraph(len(self.selected), arcs)

    def graph(self) -> Graph:
        return self.oriented().underlying

    def node_of(self) -> dict[int, int]:
        return {v: u for u, v in self.mapping.items()}

    def to_json(self) -> dict:
        return {
            "tree": self.tree.to_json(),
            "selected": list(self.selected),
            "map": {str(k): self.mapping[k] for k in sorted(self.mapping)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DerivationWitness":
        tree = BurlingTree.from_json(data["tree"])
        return cls(tree, tuple(sorted(int(x) for x in data["selected"])), {int(k): int(v) for k, v in data["map"].items()})


class WitnessCheck:
    """Outcome of :func:`verify_witness`; truthy when the witness is valid."""

    __slots__ = ("ok", "reason")

    def __init__(self, ok: bool, reason: str = ""):
        self.ok = ok
        self.reason = reason

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return f"WitnessCheck(ok={self.ok}, reason={self.reason!r})"


def verify_witness(g: Graph, w: DerivationWitness) -> WitnessCheck:
    violations = validate_tree(w.tree)
    if violations:
        return WitnessCheck(False, "invalid tree: " + violations[0])
    sel = set(w.selected)
    if len(sel) != len(w.selected):
        return WitnessCheck(False, "selected set has repeats")
    if any(not 0 <= v < w.tree.size for v in sel):
        return WitnessCheck(False, "selected node outside the tree")
    if set(w.mapping) != sel:
        return WitnessCheck(False, "correspondence domain differs from the selected set")
    if sorted(w.mapping.values()) != list(range(g.n)):
        return WitnessCheck(False, "correspondence is not a bijection onto the graph's vertices")
    derived = set()
    for u in sel:
        for v in w.tree.choose[u]:
            if v in sel:
                a, b = w.mapping[u], w.mapping[v]
                derived.add((a, b) if a < b else (b, a))
    if derived != set(g.edges):
        missing = set(g.edges) - derived
        extra = derived - set(g.edges)
        return WitnessCheck(False, f"edge sets differ (missing {sorted(missing)[:3]}, extra {sorted(extra)[:3]})")
    return WitnessCheck(True)


def restrict_witness(w: DerivationWitness, vertices: Iterable[int]) -> DerivationWitness:
    """Witness for the induced subgraph on ``vertices`` (relabelled in
    increasing order)."""
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    mapping = {u: index[v] for u, v in w.mapping.items() if v in index}
    return DerivationWitness(w.tree, tuple(sorted(mapping)), mapping)


def relabel_witness(w: DerivationWitness, perm: Mapping[int, int]) -> DerivationWitness:
    """Rename target vertices: vertex ``v`` becomes ``perm[v]``."""
    return DerivationWitness(w.tree, w.selected, {u: perm[v] for u, v in w.mapping.items()})


# ---------------------------------------------------------------------------
# Tree surgery
# ---------------------------------------------------------------------------


class _Work:
    """Mutable copy of a witness used by the transforms."""

    def __init__(self, w: DerivationWitness):
        t = w.tree
        self.root = t.root
        self.parent = list(t.parent)
        self.lb = list(t.last_born)
        self.choose = [list(c) for c in t.choose]
        self.kids = t.children()
        self.mapping = dict(w.mapping)
        self.n = len(self.mapping)

    def selected(self) -> set[int]:
        return set(self.mapping)

    def normalize(self) -> None:
        """Drop shadow branches and cut selected branches after their last
        selected node; neither changes the derived graph."""
        sel = self.selected()
        for v in range(len(self.parent)):
            if v not in sel:
                self.choose[v] = []
                continue
            path = self.choose[v]
            last = max((i for i, x in enumerate(path) if x in sel), default=-1)
            self.choose[v] = path[: last + 1] if last >= 0 else []

    def new_node(self, parent: int, last_born: bool = False) -> int:
        v = len(self.parent)
        self.parent.append(parent)
        self.lb.append(-1)
        self.choose.append([])
        self.kids.append([])
        if parent >= 0:
            if last_born:
                self.kids[parent].append(v)
                self.lb[parent] = v
            else:
                self.kids[parent].insert(0, v)
        return v

    def insert_above_last_born(self, p: int) -> int:
        v = self.lb[p]
        y = self.new_node(-1)
        self.parent[y] = p
        self.kids[p][self.kids[p].index(v)] = y
        self.lb[p] = y
        self.parent[v] = y
        self.kids[y] = [v]
        self.lb[y] = v
        for path in self.choose:
            if v in path:
                path.insert(path.index(v), y)
        return y

    def lift_children(self, a: int) -> int:
        """Insert a shadow node between ``a`` and all of its children."""
        q = self.new_node(-1)
        self.parent[q] = a
        self.kids[q] = self.kids[a]
        self.lb[q] = self.lb[a]
        for c in self.kids[q]:
            self.parent[c] = q
        self.kids[a] = [q]
        self.lb[a] = q
        for path in self.choose:
            if a in path:
                i = path.index(a)
                if i + 1 < len(path):
                    path.insert(i + 1, q)
        return q

    def move_under(self, u: int, new_parent: int) -> None:
        self.kids[self.parent[u]].remove(u)
        self.parent[u] = new_parent
        self.kids[new_parent].insert(0, u)

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] >= 0:
            v = self.parent[v]
            d += 1
        return d

    def freeze(self) -> DerivationWitness:
        t = BurlingTree(self.root, tuple(self.parent), tuple(self.lb), tuple(tuple(c) for c in self.choose))
        return DerivationWitness(t, tuple(sorted(self.mapping)), dict(self.mapping))


def _arc_nodes(work: _Work, arc: Sequence[int]) -> tuple[int, int]:
    node = {v: u for u, v in work.mapping.items()}
    a, b = int(arc[0]), int(arc[1])
    if a not in node or b not in node:
        raise ContractViolation(f"arc {a}->{b} names an unknown vertex")
    u, v = node[a], node[b]
    if v not in work.choose[u]:
        raise ContractViolation(f"{a}->{b} is not an arc of the derived graph")
    return u, v


def _selected_heads(work: _Work, u: int) -> list[int]:
    sel = work.selected()
    return [x for x in work.choose[u] if x in sel]


def subdivide_bottom_arc(w: DerivationWitness, arc: Sequence[int], k: int = 1) -> DerivationWitness:
    """Replace the bottom arc ``u -> v`` by a directed path with ``k`` new
    internal vertices, labelled ``n, n+1, ...`` from ``u`` towards ``v``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    work = _Work(w)
    work.normalize()
    u, v = _arc_nodes(work, arc)
    if work.choose[u][-1] != v:
        raise ContractViolation(f"{arc[0]}->{arc[1]} is not a bottom arc")
    head = u
    for _ in range(k):
        head = _bottom_step(work, head, v)
    return work.freeze()


def _bottom_step(work: _Work, u: int, v: int) -> int:
    path = work.choose[u]
    if path[0] == v:
        work.insert_above_last_born(work.parent[u])
    a = path[-2]
    q = work.lift_children(a)
    x = work.new_node(a)
    work.choose[x] = [q, v]
    path = work.choose[u]
    work.choose[u] = path[: path.index(a) + 1] + [x]
    work.mapping[x] = work.n
    work.n += 1
    return x


def top_subdivide(w: DerivationWitness, arc: Sequence[int], k: int = 1) -> DerivationWitness:
    """Replace the top arc ``u -> v`` (``u`` a source) by an arc ``w -> v``
    and a directed path of length ``k`` from the new vertex ``w`` to ``u``.

    ``w`` gets label ``n``; the path's internal vertices follow.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    work = _Work(w)
    work.normalize()
    u, v = _arc_nodes(work, arc)
    sel = work.selected()
    if any(u in work.choose[x] for x in sel):
        raise ContractViolation(f"{arc[0]} is not a source")
    if _selected_heads(work, u)[0] != v:
        raise ContractViolation(f"{arc[0]}->{arc[1]} is not a top arc")
    path = work.choose[u]
    i = path.index(v)
    prefix, rest = path[: i + 1], path[i + 1 :]
    p = work.parent[u]
    if work.kids[v]:
        q = work.lift_children(v)
        rest = work.choose[u][i + 2 :]
    else:
        q = work.new_node(v, last_born=True)
    new = work.new_node(p)
    work.move_under(u, v)
    work.choose[u] = [q, *rest] if rest else []
    work.choose[new] = [*prefix, u]
    work.mapping[new] = work.n
    work.n += 1
    out = work.freeze()
    if k > 1:
        out = subdivide_bottom_arc(out, (out.mapping[new], out.mapping[u]), k - 1)
    return out


def contract_arc(w: DerivationWitness, arc: Sequence[int]) -> DerivationWitness:
    """Contract ``u -> v`` where ``u`` has out-set ``{v}`` and ``v`` has
    in-set ``{u}``.  The merged vertex keeps ``u``'s label; labels above
    ``v``'s shift down by one."""
    work = _Work(w)
    work.normalize()
    u, v = _arc_nodes(work, arc)
    sel = work.selected()
    if _selected_heads(work, u) != [v]:
        raise ContractViolation(f"{arc[0]} has out-neighbours besides {arc[1]}")
    if [x for x in sel if v in work.choose[x]] != [u]:
        raise ContractViolation(f"{arc[1]} has in-neighbours besides {arc[0]}")
    path = work.choose[u]
    i = path.index(v)
    work.choose[u] = path[:i] + work.choose[v] if work.choose[v] else []
    work.choose[v] = []
    gone = work.mapping.pop(v)
    work.mapping = {x: (y - 1 if y > gone else y) for x, y in work.mapping.items()}
    work.n -= 1
    return work.freeze()


def add_pendant(w: DerivationWitness, vertex: int | None) -> DerivationWitness:
    """Add a new vertex (label ``n``) adjacent only to ``vertex``, or an
    isolated one when ``vertex`` is ``None``."""
    work = _Work(w)
    work.normalize()
    if vertex is None:
        new = work.new_node(-1)
        top = work.new_node(-1)
        for x in (work.root, new):
            work.parent[x] = top
        work.kids[top] = [new, work.root]
        work.lb[top] = work.root
        work.root = top
    else:
        t = {b: a for a, b in work.mapping.items()}[vertex]
        if t == work.root:
            top = work.new_node(-1)
            work.parent[t] = top
            work.kids[top] = [t]
            work.lb[top] = t
            work.root = top
            new = work.new_node(top)
            work.choose[new] = [t]
        else:
            p = work.parent[t]
            if work.lb[p] == t:
                new = work.new_node(p)
                work.choose[new] = [t]
            else:
                s = work.lift_children(p)
                new = work.new_node(p)
                work.choose[new] = [s, t]
    work.mapping[new] = work.n
    work.n += 1
    return work.freeze()


def union_witness(w1: DerivationWitness, w2: DerivationWitness) -> DerivationWitness:
    """Witness for the disjoint union; ``w2``'s vertices are shifted by
    ``len(w1.selected)``."""
    t1, t2 = w1.tree, w2.tree
    m1 = t1.size
    shift = lambda x: x + m1 if x >= 0 else -1  # noqa: E731
    top = t1.size + t2.size
    parent = list(t1.parent) + [shift(x) for x in t2.parent] + [-1]
    parent[t1.root] = top
    parent[t2.root + m1] = top
    last_born = list(t1.last_born) + [shift(x) for x in t2.last_born] + [t2.root + m1]
    choose = list(t1.choose) + [tuple(x + m1 for x in c) for c in t2.choose] + [()]
    mapping = dict(w1.mapping)
    n1 = len(w1.selected)
    mapping.update({u + m1: v + n1 for u, v in w2.mapping.items()})
    tree = BurlingTree(top, tuple(parent), tuple(last_born), tuple(choose))
    return DerivationWitness(tree, tuple(sorted(mapping)), mapping)


def trivial_witness(n: int = 0) -> DerivationWitness:
    """Witness for the edgeless graph on ``n`` vertices."""
    if n == 0:
        return DerivationWitness(single_node_tree(), (), {})
    w = DerivationWitness(single_node_tree(), (0,), {0: 0})
    for _ in range(n - 1):
        w = add_pendant(w, None)
    return w


def spine_witness(n: int, items: Sequence[tuple]) -> DerivationWitness:
    """Build a witness from a spine layout.

    ``items`` lists, top to bottom, either ``("hang", vertex, target)``
    (``target`` another hanging vertex further down, or ``None``) or
    ``("spine", vertex)``.  A hanging vertex gets arcs to every spine vertex
    strictly below its position and above its target, plus the target.
    """
    parent: list[int] = []
    lb: list[int] = []
    choose: list[list[int]] = []
    mapping: dict[int, int] = {}

    def node(par: int) -> int:
        parent.append(par)
        lb.append(-1)
        choose.append([])
        return len(parent) - 1

    spine: list[int] = []
    hang_at: dict[int, int] = {}
    hang_node: dict[int, int] = {}
    prev = -1
    for item in items:
        s = node(prev)
        if prev >= 0:
            lb[prev] = s
        spine.append(s)
        if item[0] == "spine":
            mapping[s] = item[1]
        else:
            h = node(s)
            mapping[h] = item[1]
            hang_at[item[1]] = len(spine) - 1
            hang_node[item[1]] = h
        prev = s
    for s in spine:
        if lb[s] < 0:
            kids = [v for v in range(len(parent)) if parent[v] == s]
            if kids:
                lb[s] = kids[-1]
    for item in items:
        if item[0] != "hang" or item[2] is None:
            continue
        i = hang_at[item[1]]
        j = hang_at[item[2]]
        if j <= i:
            raise ValueError("a hanging vertex must target a vertex further down the spine")
        h = hang_node[item[1]]
        target = hang_node[item[2]]
        choose[h] = spine[i + 1 : j + 1] + [target]
    if len(mapping) != n or sorted(mapping.values()) != list(range(n)):
        raise ValueError("spine layout must place every vertex exactly once")
    born_last = set(lb)
    for v in range(len(parent)):
        if v in born_last:
            choose[v] = []
    tree = BurlingTree(0, tuple(parent), tuple(lb), tuple(tuple(c) for c in choose))
    return DerivationWitness(tree, tuple(sorted(mapping)), mapping)


def forest_witness(g: Graph) -> DerivationWitness | None:
    """Witness for a forest, each tree oriented towards its least vertex."""
    if not g.is_forest():
        return None
    if g.n == 0:
        return trivial_witness(0)
    parent_of: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for comp in g.components():
        root = comp[0]
        parent_of[root] = None
        depth[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for y in sorted(g.adj[x]):
                if y not in depth:
                    depth[y] = depth[x] + 1
                    parent_of[y] = x
                    stack.append(y)
    order = sorted(range(g.n), key=lambda v: (-depth[v], v))
    return spine_witness(g.n, [("hang", v, parent_of[v]) for v in order])


def chandelier_witness(g: Graph) -> DerivationWitness | None:
    """Witness for a chandelier: the leaves hang above the apex, the other
    tree vertices below it, deepest first, each pointing at its parent."""
    from .structure import chandelier_decomposition

    dec = chandelier_decomposition(g)
    if dec is None:
        return None
    leaves = set(g.adj[dec.apex])
    tree_set = set(dec.tree_vertices)
    up: dict[int, int | None] = {dec.designated_root: None}
    depth = {dec.designated_root: 0}
    stack = [dec.designated_root]
    while stack:
        x = stack.pop()
        for y in sorted(g.adj[x] & tree_set):
            if y not in depth:
                depth[y] = depth[x] + 1
                up[y] = x
                stack.append(y)
    items: list[tuple] = [("hang", v, up[v]) for v in sorted(leaves)]
    items.append(("spine", dec.apex))
    rest = sorted(tree_set - leaves, key=lambda v: (-depth[v], v))
    items += [("hang", v, up[v]) for v in rest]
    return spine_witness(g.n, items)


def load_witness(text: str) -> DerivationWitness:
    return DerivationWitness.from_json(json.loads(text))


# ---------------------------------------------------------------------------
# Exhaustive witness search
# ---------------------------------------------------------------------------


def _derived_masks(t: BurlingTree) -> list[int]:
    adj = [0] * t.size
    for u in range(t.size):
        for v in t.choose[u]:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return adj


def _subsets(adj: list[int], size: int, edges: int) -> Iterator[int]:
    """Node subsets of the given size inducing exactly ``edges`` edges."""
    m = len(adj)

    def go(v: int, chosen: int, count: int, have: int):
        if count == size:
            if have == edges:
                yield chosen
            return
        if m - v < size - count:
            return
        gain = (adj[v] & chosen).bit_count()
        if have + gain <= edges:
            yield from go(v + 1, chosen | 1 << v, count + 1, have + gain)
        yield from go(v + 1, chosen, count, have)

    yield from go(0, 0, 0, 0)


def iter_witnesses(g: Graph, max_nodes: int, cap: int = DEFAULT_MAX_NODES, all_maps: bool = False) -> Iterator[DerivationWitness]:
    """Witnesses for ``g`` from every tree with at most ``max_nodes`` nodes,
    smallest trees first.  With ``all_maps`` every correspondence is
    produced, not just one per (tree, subset)."""
    from networkx.algorithms.isomorphism import GraphMatcher

    from .graph import to_networkx

    if g.n == 0:
        yield trivial_witness(0)
        return
    degrees = sorted(g.degree(v) for v in range(g.n))
    target = to_networkx(g)
    for t in enumerate_trees(max_nodes, cap, min_nodes=g.n):
        adj = _derived_masks(t)
        if sum(x.bit_count() for x in adj) < 2 * g.m:
            continue
        for chosen in _subsets(adj, g.n, g.m):
            nodes = [v for v in range(t.size) if chosen >> v & 1]
            if sorted((adj[v] & chosen).bit_count() for v in nodes) != degrees:
                continue
            index = {v: i for i, v in enumerate(nodes)}
            h = Graph(len(nodes), [(index[u], index[w]) for u in nodes for w in t.choose[u] if chosen >> w & 1])
            gm = GraphMatcher(to_networkx(h), target)
            for iso in gm.isomorphisms_iter():
                yield DerivationWitness(t, tuple(nodes), {nodes[i]: iso[i] for i in range(len(nodes))})
                if not all_maps:
                    break


def find_witness(g: Graph, max_nodes: int, cap: int = DEFAULT_MAX_NODES) -> DerivationWitness | None:
    return next(iter_witnesses(g, max_nodes, cap), None)
