"""Membership decisions with certificates in both directions.

:func:`decide_burling` runs cheap certificates first (triangle, wheel,
forest and chandelier layouts), then splits off components and pendant
vertices, then tries the trichotomy test, the family deciders, the
orientation engine and finally an exhaustive witness search.  Whatever it
emits has been replayed by :func:`verify_verdict`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from .certificates import (
    FAMILY_THEOREM,
    MEMBER,
    NON_MEMBER,
    ORIENTATION_UNSAT,
    TRIANGLE,
    TRICHOTOMY,
    UNKNOWN,
    WHEEL,
    Budgets,
    NonBurlingReason,
    Verdict,
)
from .families import (
    NOT_IN_FAMILY,
    classify_k5_subdivision,
    decide_k5,
    family_refutation,
    family_witness,
    replay_family_reason,
)
from .graph import Graph, ResourceError, find_triangle, find_wheel, is_hole
from .structure import (
    ALL_CONSTRAINTS,
    CORE_CONSTRAINTS,
    OrientationRefutation,
    TrichotomyRefutation,
    orientation_feasible,
    replay_trichotomy,
    trichotomy_refute,
    verify_refutation,
)
from .tree import (
    DEFAULT_MAX_NODES,
    DerivationWitness,
    add_pendant,
    chandelier_witness,
    find_witness,
    forest_witness,
    relabel_witness,
    trivial_witness,
    union_witness,
    verify_witness,
)

THREADS_ENV = "BURLING_LAB_THREADS"


def _member(w: DerivationWitness, budgets: Budgets, route: str) -> Verdict:
    return Verdict(MEMBER, budgets, witness=w, note=route)


def _non_member(reason: NonBurlingReason, budgets: Budgets) -> Verdict:
    return Verdict(NON_MEMBER, budgets, reason=reason)


def _strip(data: dict) -> dict:
    return {k: v for k, v in data.items() if k != "kind"}


def _lift(reason: NonBurlingReason, keep: Sequence[int]) -> NonBurlingReason:
    """Rephrase a reason found on the induced subgraph ``keep``."""
    ev = reason.evidence
    if reason.kind == TRIANGLE:
        return NonBurlingReason(TRIANGLE, {"vertices": [keep[v] for v in ev["vertices"]]})
    if reason.kind == WHEEL:
        return NonBurlingReason(WHEEL, {"hole": [keep[v] for v in ev["hole"]], "center": keep[ev["center"]]})
    if reason.kind == TRICHOTOMY:
        return NonBurlingReason(TRICHOTOMY, {**ev, "subgraph": sorted(keep[v] for v in ev["subgraph"])})
    if "within" in ev:
        inner = [keep[v] for v in ev["within"]]
        return NonBurlingReason(reason.kind, {**ev, "within": inner})
    return NonBurlingReason(reason.kind, {"within": list(keep), **ev})


def decide_burling(g: Graph, budgets: Budgets | None = None) -> Verdict:
    budgets = budgets or Budgets()
    v = _decide(g, budgets)
    if not verify_verdict(g, v):
        raise AssertionError(f"emitted certificate failed replay: {v.to_json()}")
    return v


def _decide(g: Graph, budgets: Budgets) -> Verdict:
    if g.n == 0:
        return _member(trivial_witness(0), budgets, "empty")
    tri = find_triangle(g)
    if tri is not None:
        return _non_member(NonBurlingReason(TRIANGLE, {"vertices": list(tri)}), budgets)
    wheel = find_wheel(g)
    if wheel is not None:
        hole, centre = wheel
        return _non_member(NonBurlingReason(WHEEL, {"hole": list(hole), "center": centre}), budgets)
    w = forest_witness(g)
    if w is not None:
        return _member(w, budgets, "forest")
    w = chandelier_witness(g)
    if w is not None:
        return _member(w, budgets, "chandelier")

    split = _split(g, budgets)
    if split is not None:
        return split

    ref = trichotomy_refute(g)
    if ref is not None:
        return _non_member(NonBurlingReason(TRICHOTOMY, _strip(ref.to_json())), budgets)

    k5 = classify_k5_subdivision(g)
    if k5.kind != NOT_IN_FAMILY:
        return _non_member(decide_k5(g, k5, budgets.max_orient_edges), budgets)
    found = family_witness(g)
    if found is not None:
        return _member(found[1], budgets, found[0])
    family = family_refutation(g)

    notes = []
    for constraints in (CORE_CONSTRAINTS, ALL_CONSTRAINTS):
        try:
            res = orientation_feasible(g, constraints, max_edges=budgets.max_orient_edges)
        except ResourceError as exc:
            notes.append(str(exc))
            break
        if isinstance(res, OrientationRefutation):
            return _non_member(NonBurlingReason(ORIENTATION_UNSAT, _strip(res.to_json())), budgets)
    if family is not None:
        return _non_member(family, budgets)

    if g.n <= budgets.max_tree_nodes:
        try:
            w = find_witness(g, budgets.max_tree_nodes, cap=max(budgets.max_tree_nodes, DEFAULT_MAX_NODES))
        except ResourceError as exc:
            notes.append(str(exc))
            w = None
        if w is not None:
            return _member(w, budgets, "tree-search")
        notes.append(f"no witness among trees with at most {budgets.max_tree_nodes} nodes")
    else:
        notes.append(f"graph has more vertices than the tree budget ({budgets.max_tree_nodes})")
    return Verdict(UNKNOWN, budgets, note="; ".join(notes))


def _split(g: Graph, budgets: Budgets) -> Verdict | None:
    """Decide disconnected graphs component by component and peel pendant
    vertices; ``None`` when neither applies."""
    comps = g.components()
    if len(comps) > 1:
        parts = []
        for comp in comps:
            h, keep = g.induced(comp)
            v = _decide(h, budgets)
            if v.is_non_member:
                return _non_member(_lift(v.reason, keep), budgets)
            parts.append((v, keep))
        if any(v.verdict == UNKNOWN for v, _ in parts):
            notes = "; ".join(v.note for v, _ in parts if v.verdict == UNKNOWN)
            return Verdict(UNKNOWN, budgets, note=notes)
        w = parts[0][0].witness
        order = list(parts[0][1])
        for v, keep in parts[1:]:
            w = union_witness(w, v.witness)
            order += keep
        return _member(relabel_witness(w, {i: order[i] for i in range(len(order))}), budgets, "components")
    leaf = next((v for v in range(g.n) if g.degree(v) == 1), None)
    if leaf is None:
        return None
    rest = [v for v in range(g.n) if v != leaf]
    h, keep = g.induced(rest)
    v = _decide(h, budgets)
    if v.is_non_member:
        return _non_member(_lift(v.reason, keep), budgets)
    if v.verdict == UNKNOWN:
        return v
    (anchor,) = g.adj[leaf]
    w = add_pendant(v.witness, keep.index(anchor))
    order = keep + [leaf]
    return _member(relabel_witness(w, {i: order[i] for i in range(len(order))}), budgets, "pendant")


def verify_verdict(g: Graph, v: Verdict) -> bool:
    if v.verdict == UNKNOWN:
        return True
    if v.verdict == MEMBER:
        return v.witness is not None and bool(verify_witness(g, v.witness))
    if v.verdict != NON_MEMBER or v.reason is None:
        return False
    return replay_reason(g, v.reason, v.budgets)


def replay_reason(g: Graph, reason: NonBurlingReason, budgets: Budgets | None = None) -> bool:
    budgets = budgets or Budgets()
    ev = dict(reason.evidence)
    try:
        if "within" in ev:
            keep = [int(x) for x in ev.pop("within")]
            if len(set(keep)) != len(keep) or any(not 0 <= x < g.n for x in keep):
                return False
            h, _ = g.induced(keep)
            return replay_reason(h, NonBurlingReason(reason.kind, ev), budgets)
        if reason.kind == TRIANGLE:
            a, b, c = (int(x) for x in ev["vertices"])
            return all(0 <= x < g.n for x in (a, b, c)) and g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
        if reason.kind == WHEEL:
            hole = [int(x) for x in ev["hole"]]
            centre = int(ev["center"])
            if any(not 0 <= x < g.n for x in [*hole, centre]) or centre in hole:
                return False
            return is_hole(g, hole) and len(g.adj[centre] & set(hole)) >= 3
        if reason.kind == TRICHOTOMY:
            ref = TrichotomyRefutation(tuple(int(x) for x in ev["subgraph"]), int(ev["minDegree"]))
            if ev.get("starCutset") is not None or ev.get("chandelier") is not None:
                return False
            again = trichotomy_refute(g, ref.vertices) if replay_trichotomy(g, ref) else None
            return again is not None and again.min_degree == ref.min_degree
        if reason.kind == ORIENTATION_UNSAT:
            ref = OrientationRefutation.from_json(ev)
            return verify_refutation(g, ref, max_edges=max(budgets.max_orient_edges, g.m))
        if reason.kind == FAMILY_THEOREM:
            return replay_family_reason(g, reason)
    except (KeyError, TypeError, ValueError):
        return False
    return False


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def decide_batch(graphs: Sequence[Graph], budgets: Budgets | None = None) -> list[Verdict | Exception]:
    """Element-wise :func:`decide_burling`, in input order.  A failure on
    one graph is returned in its slot instead of aborting the batch."""
    budgets = budgets or Budgets()

    def one(g: Graph) -> Verdict | Exception:
        try:
            return decide_burling(g, budgets)
        except Exception as exc:  # collected per element
            return exc

    workers = _threads()
    if workers == 1 or len(graphs) < 2:
        return [one(g) for g in graphs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, graphs))
