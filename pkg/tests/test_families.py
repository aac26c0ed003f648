import json
from itertools import permutations

import networkx as nx
import pytest

from burling_lab.families import (
    BURLING,
    IMMEDIATE,
    K4_BASE,
    NECKLACE2_SHORT,
    NECKLACE3_TWO_STRINGS,
    NON_BURLING,
    NOT_IN_FAMILY,
    TYPE_A,
    TYPE_B,
    DumbbellSpec,
    build_dumbbell,
    build_necklace,
    classify_k4_subdivision,
    classify_k5_subdivision,
    decide_dumbbell,
    decide_k5,
    decide_necklace,
    dumbbell_gallery,
    family_refutation,
    gallery,
    gallery_export,
    gallery_match,
    k4_witness,
    k5_type_a_core,
    long_theta,
    necklace_from_json,
    necklace_witness,
    parse_dumbbell,
    parse_necklace,
    replay_family_reason,
    subdivides,
    type4_k4,
    weakly_pervasive_report,
)
from burling_lab.graph import complete_graph, cycle_graph, from_graph6, is_isomorphic, subdivide_edge, to_networkx
from burling_lab.recognizer import decide_burling, verify_verdict
from burling_lab.sweeps import K4_EDGES, k4_subdivision, necklace_graph, necklace_table_oracle
from burling_lab.tree import verify_witness
from helpers import k5_subdivision


def _kept(counts):
    return {e for e, c in zip(K4_EDGES, counts) if c == 0}


def test_k4_type_three():
    g = k4_subdivision((0, 0, 1, 1, 1, 0))
    cls = classify_k4_subdivision(g)
    assert cls.kind == BURLING and cls.type == 3
    w = k4_witness(g, cls)
    assert w is not None and verify_witness(g, w)
    out = cls.to_json()
    assert out["family"] == "k4" and out["type"] == 3 and set(out["labeling"]) == set("abcd")


def test_k4_labeling_is_consistent():
    g = k4_subdivision((0, 0, 1, 1, 1, 0))
    cls = classify_k4_subdivision(g)
    a, b, c, d = cls.labeling
    assert g.has_edge(a, b) and g.has_edge(a, c)
    assert not g.has_edge(a, d) and not g.has_edge(b, c)


@pytest.mark.parametrize(
    "counts, condition",
    [
        ((1, 1, 1, 1, 1, 1), "no-unsubdivided-edge"),
        ((1, 1, 1, 1, 1, 0), "single-unsubdivided-edge"),
        ((0, 1, 1, 1, 1, 0), "unsubdivided-matching"),
        ((0, 0, 0, 1, 1, 1), "unsubdivided-claw"),
    ],
)
def test_k4_failures(counts, condition):
    g = k4_subdivision(counts)
    cls = classify_k4_subdivision(g)
    assert cls.kind == NON_BURLING and cls.condition == condition
    assert cls.to_json() == {"family": "k4", "verdict": NON_BURLING, "condition": condition, "branch": list(cls.subdivision.branch)}
    assert family_refutation(g).evidence["clause"] == condition


def test_k4_burling_iff_labeling_exists():
    for kept_bits in range(64):
        counts = [0 if kept_bits >> i & 1 else 1 for i in range(6)]
        kept = _kept(counts)
        has_triangle = any(all(tuple(sorted(p)) in kept for p in [(x, y), (y, z), (x, z)]) for x, y, z in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
        if has_triangle:
            continue
        g = k4_subdivision(counts)
        labeled = any(
            tuple(sorted((a, b))) in kept and tuple(sorted((a, c))) in kept and tuple(sorted((a, d))) not in kept and tuple(sorted((b, c))) not in kept
            for a, b, c, d in permutations(range(4))
        )
        assert classify_k4_subdivision(g).is_burling == labeled


def test_k4_not_in_family():
    assert classify_k4_subdivision(cycle_graph(6)).to_json() == {"family": "none"}
    assert classify_k4_subdivision(complete_graph(5)).kind == NOT_IN_FAMILY


def test_k5_classes():
    a = k5_subdivision([0, 1, 2, 3])
    b = k5_subdivision([0, 1, 2, 3, 4])
    assert classify_k5_subdivision(a).kind == TYPE_A
    assert classify_k5_subdivision(b).kind == TYPE_B
    assert classify_k5_subdivision(complete_graph(5)).kind == IMMEDIATE
    assert classify_k5_subdivision(cycle_graph(5)).kind == NOT_IN_FAMILY


def test_k5_type_a_core_and_decision():
    g = k5_subdivision([0, 1, 2, 3])
    cls = classify_k5_subdivision(g)
    core = k5_type_a_core(g, cls)
    # drops the one internal vertex on each of the two ring diagonals
    assert len(core) == g.n - 2
    reason = decide_k5(g, cls)
    assert reason.kind == "trichotomy" and reason.evidence["subgraph"] == core
    assert decide_k5(k5_subdivision([0, 1, 2, 3, 4])).kind == "orientation-unsat"
    with pytest.raises(ValueError):
        decide_k5(cycle_graph(5))


def test_necklace_build_and_parse_round_trip():
    g = build_necklace([(4, 0, 2), (4, 0, 2)], [0, 1])
    assert g.n == 7
    nk = parse_necklace(g)
    assert nk.m == 2 and nk.string_lengths in ((0, 1), (1, 0))
    beads, strings = nk.spec()
    assert is_isomorphic(build_necklace(beads, strings), g)
    assert necklace_from_json({"beads": [{"len": 4, "a": 0, "b": 2}] * 2, "strings": [0, 1]}) == g
    assert json.loads(json.dumps(nk.to_json()))["m"] == 2


def test_double_c4_with_empty_strings_has_six_vertices():
    assert build_necklace([(4, 0, 2), (4, 0, 2)], [0, 0]).n == 6


def test_necklace_rejects_bad_specs():
    with pytest.raises(ValueError):
        build_necklace([(4, 0, 2)], [0])
    with pytest.raises(ValueError):
        build_necklace([(4, 0, 1), (4, 0, 2)], [0, 0])
    with pytest.raises(ValueError):
        build_necklace([(3, 0, 2), (4, 0, 2)], [0, 0])
    assert parse_necklace(cycle_graph(6)) is None
    assert parse_necklace(complete_graph(4)) is None


def test_necklace_decisions():
    shared = parse_necklace(build_necklace([(4, 0, 2), (4, 0, 2)], [0, 1]))
    assert decide_necklace(shared).to_json() == {"burling": True, "clause": "beads share a vertex"}
    apart = parse_necklace(necklace_graph(((6, 3), (6, 3)), (1, 1)))
    assert decide_necklace(apart).burling is False
    four = parse_necklace(necklace_graph(((4, 2),) * 4, (0, 0, 0, 0)))
    assert decide_necklace(four).clause == "four or more beads"


def test_three_long_beads_without_short_bead():
    g = build_necklace([(6, 0, 3)] * 3, [0, 0, 0])
    assert g.n == 15
    nk = parse_necklace(g)
    assert nk.short_beads == ()
    d = decide_necklace(nk)
    assert d.to_json() == {"burling": False, "clause": "three beads and no short bead"}
    v = decide_burling(g)
    assert v.is_non_member and verify_verdict(g, v)


@pytest.mark.parametrize("beads, strings", [(((4, 2), (6, 3)), (1, 2)), (((5, 2), (4, 2), (6, 3)), (0, 1, 1)), (((4, 2), (4, 2), (4, 2)), (0, 0, 2))])
def test_necklace_against_independent_rebuild(beads, strings):
    g = necklace_graph(beads, strings)
    ref, burling, _ = necklace_table_oracle(beads, strings)
    assert nx.is_isomorphic(to_networkx(g), ref)
    nk = parse_necklace(g)
    assert decide_necklace(nk).burling == burling
    if burling:
        w = necklace_witness(nk)
        if w is not None:
            assert verify_witness(g, w)


def test_templates_verify_on_their_base():
    for tpl in (K4_BASE, NECKLACE2_SHORT, NECKLACE3_TWO_STRINGS):
        assert verify_witness(tpl.graph, tpl.witness)


def test_dumbbell_parse_round_trip():
    for _, spec in dumbbell_gallery():
        g = build_dumbbell(spec)
        parsed, (keep1, keep2) = parse_dumbbell(g)
        assert parsed.connector_length == spec.connector_length
        assert is_isomorphic(parsed.g1, spec.g1) and is_isomorphic(parsed.g2, spec.g2)
        assert DumbbellSpec.from_json(json.loads(json.dumps(spec.to_json()))) == spec
        assert set(keep1).isdisjoint(keep2)


def test_dumbbells_refuted():
    for _, spec in dumbbell_gallery():
        g = build_dumbbell(spec)
        reason = decide_dumbbell(g, spec)
        assert reason is not None and reason.evidence["theorem"] == "subordinate-dumbbell"
        assert replay_family_reason(g, reason)


def test_dumbbell_with_empty_connector():
    k4, x = type4_k4()
    g = build_dumbbell(DumbbellSpec(k4, k4, x, x, 0))
    assert g.n == 2 * k4.n - 1
    spec, _ = parse_dumbbell(g)
    assert spec.connector_length == 0


def test_dumbbell_needs_subordinate_ends():
    c = cycle_graph(5)
    spec = DumbbellSpec(c, c, 0, 0, 2)
    assert decide_dumbbell(build_dumbbell(spec), spec) is None
    with pytest.raises(ValueError):
        decide_dumbbell(cycle_graph(5), spec)
    with pytest.raises(ValueError):
        DumbbellSpec(c, c, 9, 0, 1)


def test_theta_has_expected_size():
    g, mid = long_theta((4, 3, 3))
    assert g.n == 2 + 3 + 2 + 2 and g.degree(mid) == 2
    with pytest.raises(ValueError):
        long_theta((1, 3, 3))


def test_gallery_sizes_and_matching():
    sizes = {name: (g.n, g.m) for name, g, _ in gallery()}
    assert sizes == {
        "twin_k4_glued_on_edge": (14, 19),
        "twin_k4_sharing_vertex": (15, 21),
        "twin_k4_with_theta": (20, 27),
    }
    for name, g, _ in gallery():
        assert gallery_match(g) == name
        h = subdivide_edge(g, g.edges[0], 2)
        assert subdivides(h, g) and gallery_match(h) == name
    assert gallery_match(cycle_graph(7)) is None


def test_gallery_export_round_trips():
    for item, (_, g, _) in zip(gallery_export(), gallery()):
        assert from_graph6(item["graph6"]) == g and item["n"] == g.n


def test_weakly_pervasive_report_claims():
    name, base, _ = gallery()[0]
    v = decide_burling(base)
    assert weakly_pervasive_report(base, [v], name)["claim"] == "non-weakly-pervasive"
    assert weakly_pervasive_report(base, [v])["claim"] == "evidence only - not a proof"
    c5 = cycle_graph(5)
    member = decide_burling(c5)
    report = weakly_pervasive_report(base, [member], name)
    assert report["claim"] == "contradicted" and report["members"] == 1
    assert weakly_pervasive_report(c5, [member], name)["basis"].startswith("theorem")
