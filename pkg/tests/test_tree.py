import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burling_lab.graph import Graph, ResourceError, complete_graph, cycle_graph, has_triangle, is_isomorphic, subdivide_edge
from burling_lab.tree import (
    BurlingTree,
    ContractViolation,
    DerivationWitness,
    InvalidTreeError,
    add_pendant,
    canonical_key,
    chandelier_witness,
    classify_arcs,
    contract_arc,
    count_trees,
    derive,
    enumerate_trees,
    find_witness,
    fully_derive,
    restrict_witness,
    subdivide_bottom_arc,
    top_subdivide,
    union_witness,
    validate_tree,
    verify_witness,
)
from helpers import brute_tree_count, random_transforms, random_witness

TREES_6 = list(enumerate_trees(6))

# sizes 1..6 by direct generate-and-validate (helpers.brute_tree_count);
# the 6-node brute force takes ~15 s so its value is frozen here
TREE_COUNTS = {1: 1, 2: 1, 3: 3, 4: 11, 5: 46, 6: 217}


def three_node_tree(path=(2,)):
    return BurlingTree(root=0, parent=(-1, 0, 0), last_born=(2, -1, -1), choose=((), tuple(path), ()))


def test_validate_examples():
    assert validate_tree(BurlingTree(0, (-1,), (-1,), ((),))) == []
    assert validate_tree(three_node_tree()) == []
    bad = validate_tree(three_node_tree(path=(1,)))
    assert bad and "node 1" in bad[0] and "clause iii" in bad[0]


def test_validate_rejects_choose_on_last_born():
    t = BurlingTree(0, (-1, 0, 0), (2, -1, -1), ((), (2,), (1,)))
    assert any("node 2" in v for v in validate_tree(t))


def test_fully_derive_examples():
    assert fully_derive(BurlingTree(0, (-1,), (-1,), ((),))).arcs == frozenset()
    assert fully_derive(three_node_tree()).arcs == {(1, 2)}
    with pytest.raises(InvalidTreeError):
        fully_derive(three_node_tree(path=(1,)))


def test_derive_subsets():
    t = TREES_6[-1]
    og = fully_derive(t)
    assert derive(t, range(t.size))[0] == og
    assert derive(t, [])[0].n == 0
    with pytest.raises(ValueError):
        derive(t, [t.size])


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_enumeration_matches_brute_force(k):
    assert brute_tree_count(k) == TREE_COUNTS[k]
    assert sum(1 for _ in enumerate_trees(k, min_nodes=k)) == TREE_COUNTS[k]


def test_enumeration_six_nodes_and_soundness():
    assert sum(1 for t in TREES_6 if t.size == 6) == TREE_COUNTS[6]
    assert all(validate_tree(t) == [] for t in TREES_6)
    keys = [canonical_key(t) for t in TREES_6]
    assert len(set(keys)) == len(keys)
    assert count_trees(6) == sum(TREE_COUNTS.values())


def test_enumeration_cap():
    with pytest.raises(ResourceError):
        next(enumerate_trees(10))


def test_enumeration_is_deterministic():
    a = [t.to_json() for t in enumerate_trees(5)]
    b = [t.to_json() for t in enumerate_trees(5)]
    assert a == b


def test_derived_graphs_are_triangle_free_and_out_sets_are_branches():
    for t in TREES_6:
        og = fully_derive(t)
        assert not has_triangle(og.underlying)
        for u in range(t.size):
            path = t.choose[u]
            assert set(og.out[u]) == set(path)
            assert all(t.parent[b] == a for a, b in zip(path, path[1:]))
        # every derived graph of a small tree is triangle free as well
        if t.size <= 5:
            for k in range(t.size + 1):
                for sub in combinations(range(t.size), k):
                    assert not has_triangle(derive(t, sub)[0].underlying)


def test_no_small_tree_derives_a_triangle():
    assert find_witness(complete_graph(3), 6) is None


def test_classify_arcs_labels():
    t = three_node_tree()
    assert classify_arcs(t, [0, 1, 2]) == {(1, 2): "top+bottom"}
    for t in TREES_6:
        labels = classify_arcs(t, range(t.size))
        for u in range(t.size):
            mine = [lab for (a, _), lab in labels.items() if a == u]
            if mine:
                tops = sum(lab in ("top", "top+bottom") for lab in mine)
                bottoms = sum(lab in ("bottom", "top+bottom") for lab in mine)
                assert tops == 1 and bottoms == 1


def test_verify_witness_examples():
    w = DerivationWitness(three_node_tree(), (1, 2), {1: 0, 2: 1})
    assert verify_witness(Graph(2, [(0, 1)]), w)
    assert not verify_witness(Graph(2, []), w)
    assert not verify_witness(complete_graph(3), w)
    c4 = chandelier_witness(cycle_graph(4))
    assert c4 is not None and verify_witness(cycle_graph(4), c4)
    assert chandelier_witness(complete_graph(4)) is None


def test_verify_witness_rejects_forgeries():
    g = cycle_graph(5)
    w = chandelier_witness(g)
    # transposing two vertices of C5 is not an automorphism
    t = {0: 2, 2: 0}
    swapped = {u: t.get(v, v) for u, v in w.mapping.items()}
    assert not verify_witness(g, DerivationWitness(w.tree, w.selected, swapped))
    partial = dict(w.mapping)
    partial.pop(next(iter(partial)))
    check = verify_witness(g, DerivationWitness(w.tree, tuple(sorted(partial)), partial))
    assert not check and check.reason


def test_witness_json_round_trip():
    w = chandelier_witness(cycle_graph(6))
    assert DerivationWitness.from_json(w.to_json()) == w


def _edge_path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def test_transform_examples():
    w = DerivationWitness(three_node_tree(), (1, 2), {1: 0, 2: 1})
    w2 = subdivide_bottom_arc(w, (0, 1))
    assert verify_witness(_edge_path(3).relabel([0, 2, 1]), w2)
    once = subdivide_bottom_arc(subdivide_bottom_arc(w, (0, 1)), (0, 2))
    twice = subdivide_bottom_arc(w, (0, 1), k=2)
    assert is_isomorphic(once.graph(), twice.graph())
    assert verify_witness(once.graph(), once)
    t = top_subdivide(w, (0, 1))
    assert verify_witness(t.graph(), t) and t.graph().n == 3
    c = contract_arc(w2, (0, 2))
    assert is_isomorphic(c.graph(), Graph(2, [(0, 1)]))
    with pytest.raises(ContractViolation):
        top_subdivide(w2, (2, 1))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_transform_sequences_keep_witnesses_valid(seed):
    rng = random.Random(seed)
    w = random_witness(rng)
    assert verify_witness(w.graph(), w)
    w = random_transforms(w, rng)
    assert verify_witness(w.graph(), w)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_restriction_and_pendants(seed):
    rng = random.Random(seed)
    w = random_witness(rng)
    g = w.graph()
    keep = [v for v in range(g.n) if rng.random() < 0.6]
    h, _ = g.induced(keep)
    assert verify_witness(h, restrict_witness(w, keep))
    anchor = rng.choice([None, *range(g.n)])
    p = add_pendant(w, anchor)
    edges = list(g.edges) + ([] if anchor is None else [(anchor, g.n)])
    assert verify_witness(Graph(g.n + 1, edges), p)


def test_union_witness():
    a, b = cycle_graph(4), cycle_graph(5)
    w = union_witness(chandelier_witness(a), chandelier_witness(b))
    edges = list(a.edges) + [(u + 4, v + 4) for u, v in b.edges]
    assert verify_witness(Graph(9, edges), w)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_chandelier_witness_on_cycles(n):
    g = cycle_graph(n)
    w = chandelier_witness(g)
    assert w is not None and verify_witness(g, w)


def test_find_witness_by_search():
    g = subdivide_edge(cycle_graph(6), (0, 1))
    assert find_witness(g, 6) is None
    w = find_witness(g, 9)
    assert w is not None and verify_witness(g, w)
