import json
import random

import pytest

from burling_lab import Budgets, Graph, NonBurlingReason, Verdict, decide_batch, decide_burling, replay_reason, verify_verdict
from burling_lab.graph import complete_graph, cycle_graph, has_triangle
from burling_lab.tree import derive, enumerate_trees, restrict_witness, verify_witness
from helpers import atlas, k5_subdivision, wheel


def test_triangle():
    v = decide_burling(complete_graph(3))
    assert v.is_non_member and v.reason.kind == "triangle"
    assert verify_verdict(complete_graph(3), v)


def test_wheel_on_six_vertices_is_rejected():
    # any 3 of the 5 rim vertices include two neighbours, so a triangle is found first
    g = wheel(5, [0, 1, 3])
    v = decide_burling(g)
    assert v.is_non_member and v.reason.kind == "triangle"


def test_triangle_free_wheel():
    g = wheel(6, [0, 2, 4])
    assert not has_triangle(g)
    v = decide_burling(g)
    assert v.is_non_member and v.reason.kind == "wheel"
    assert len(set(g.adj[v.reason.evidence["center"]]) & set(v.reason.evidence["hole"])) >= 3


def test_c5_member():
    v = decide_burling(cycle_graph(5))
    assert v.is_member and verify_witness(cycle_graph(5), v.witness)
    assert verify_verdict(cycle_graph(5), v)


def test_forged_triangle_rejected():
    c5 = cycle_graph(5)
    fake = Verdict("non-member", Budgets(), reason=NonBurlingReason("triangle", {"vertices": [0, 1, 2]}))
    assert not verify_verdict(c5, fake)
    assert not replay_reason(c5, NonBurlingReason("triangle", {"vertices": [0, 1, 9]}))
    assert not verify_verdict(c5, Verdict("non-member", Budgets(), reason=NonBurlingReason("wheel", {"hole": [0, 1, 2, 3, 4], "center": 0})))


def test_member_verdict_for_wrong_graph_fails():
    v = decide_burling(cycle_graph(5))
    assert not verify_verdict(cycle_graph(6), v)


def test_within_evidence_replays():
    k = k5_subdivision([0, 1, 2, 3, 4])
    g = Graph(11, list(k.edges) + [(3, 10)]).relabel([10, *range(10)])
    v = decide_burling(g)
    assert v.is_non_member and v.reason.kind == "orientation-unsat"
    assert v.reason.evidence["within"] == [v for v in range(11) if v != 9]
    assert verify_verdict(g, v)
    tampered = dict(v.reason.evidence, within=list(range(10)))
    assert not replay_reason(g, NonBurlingReason(v.reason.kind, tampered))
    tampered = dict(v.reason.evidence, within=[0, 0, 1])
    assert not replay_reason(g, NonBurlingReason(v.reason.kind, tampered))


def test_batch():
    out = decide_batch([complete_graph(3), cycle_graph(4), cycle_graph(5)])
    assert [v.verdict for v in out] == ["non-member", "member", "member"]
    assert decide_batch([]) == []


def test_batch_threads_do_not_change_results(monkeypatch):
    graphs = atlas(6)
    serial = [v.to_json() for v in decide_batch(graphs)]
    monkeypatch.setenv("BURLING_LAB_THREADS", "4")
    assert [v.to_json() for v in decide_batch(graphs)] == serial
    monkeypatch.setenv("BURLING_LAB_THREADS", "junk")
    assert [v.to_json() for v in decide_batch(graphs)] == serial


def test_batch_collects_errors():
    class Broken:
        n = 1

    out = decide_batch([cycle_graph(4), Broken(), cycle_graph(5)])
    assert out[0].is_member and isinstance(out[1], Exception) and out[2].is_member


def test_five_vertex_graphs_all_resolve():
    for g in atlas(5):
        if g.n != 5:
            continue
        v = decide_burling(g)
        assert v.verdict != "unknown", g


def test_derived_graphs_never_rejected():
    rng = random.Random(0)
    for t in enumerate_trees(6):
        for _ in range(2):
            sel = [x for x in range(t.size) if rng.random() < 0.75]
            og, _ = derive(t, sel)
            assert not decide_burling(og.underlying).is_non_member


def test_restriction_closure():
    rng = random.Random(1)
    for g in rng.sample(atlas(7), 40):
        v = decide_burling(g)
        if not v.is_member:
            continue
        keep = sorted(rng.sample(range(g.n), rng.randint(0, g.n)))
        h, _ = g.induced(keep)
        assert verify_witness(h, restrict_witness(v.witness, keep))


def test_verdict_json():
    v = decide_burling(cycle_graph(5))
    data = v.to_json()
    assert list(data) == ["verdict", "certificate", "budgets"]
    assert data["budgets"] == {"maxTreeNodes": 9, "maxOrientEdges": 28}
    again = Verdict.from_json(json.loads(json.dumps(data)))
    assert verify_verdict(cycle_graph(5), again)
    neg = decide_burling(complete_graph(3))
    assert Verdict.from_json(neg.to_json()) == neg


def test_unknown_when_budgets_are_tiny():
    g = Graph(6, [(0, 1), (0, 3), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5)])
    tiny = decide_burling(g, Budgets(max_tree_nodes=1, max_orient_edges=0))
    assert tiny.verdict == "unknown" and "tree budget" in tiny.note and verify_verdict(g, tiny)
    assert Verdict.from_json(tiny.to_json()) == tiny
    assert decide_burling(g).is_member


def test_budgets_validate():
    with pytest.raises(ValueError):
        Budgets(max_tree_nodes=0)
    with pytest.raises(ValueError):
        NonBurlingReason("vibes", {})
