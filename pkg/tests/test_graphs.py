import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import two_triangles_instance
from oracles import best_modularity_partition, exact_modularity
from partmax.cnf import MaxSatInstance, SoftClause
from partmax.graphs import (
    CLAUSE_NODE,
    VAR_NODE,
    ResolutionGraphTooLarge,
    WeightedGraph,
    build_cvig,
    build_res,
    build_vig,
    derive_partitions,
    detect_communities,
    dump_edges,
    modularity,
    partition_by_graph,
    random_partition,
)

V = VAR_NODE
C = CLAUSE_NODE


def soft_blocks(pinst):
    """Partition blocks as a set of frozensets of soft-clause indices."""
    return {frozenset(ids) for ids in pinst.blocks().values()}


# ------------------------------------------------------------------- vig


def test_vig_of_two_triangles_matches_known_edge_set():
    g = build_vig(two_triangles_instance())
    edges = {(u[1], v[1]) for u, v, _ in g.edges()}
    assert edges == {(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (3, 6)}
    assert all(w == 1 for _, _, w in g.edges())


def test_vig_single_binary_clause():
    inst = MaxSatInstance(2, hard=[(1, 2)], soft=[], top=1)
    g = build_vig(inst)
    assert g.edges() == [((V, 1), (V, 2), Fraction(1))]


def test_vig_unit_soft_contributes_no_edge():
    inst = MaxSatInstance(1, hard=[], soft=[SoftClause((-1,), 1)], top=2)
    g = build_vig(inst)
    assert g.edges() == []
    assert (V, 1) in g.adj


def test_vig_total_weight_counts_wide_clauses():
    inst = MaxSatInstance(
        5, hard=[(1, 2, 3), (3, 4), (5,)], soft=[SoftClause((-1, 2), 1)], top=2
    )
    g = build_vig(inst)
    # each clause with >= 2 distinct variables contributes exactly 1
    assert g.total_weight() == 3


# ------------------------------------------------------------------ cvig


def test_cvig_of_two_triangles_shape():
    inst = two_triangles_instance()
    g = build_cvig(inst)
    var_nodes = [n for n in g.nodes() if n[0] == V]
    clause_nodes = [n for n in g.nodes() if n[0] == C]
    assert len(var_nodes) == 6
    assert len(clause_nodes) == 11
    # soft 0 is the unit clause on v1: clause node index 7 connects only to v1
    assert sorted(g.adj[(C, 7)]) == [(V, 1)]
    assert g.adj[(C, 7)][(V, 1)] == 1


def test_cvig_empty_formula_is_empty():
    g = build_cvig(MaxSatInstance(0, [], [], top=1))
    assert g.nodes() == []


def test_cvig_edge_weight_is_inverse_clause_size():
    inst = MaxSatInstance(2, hard=[(1, 2)], soft=[], top=1)
    g = build_cvig(inst)
    assert g.adj[(C, 0)][(V, 1)] == Fraction(1, 2)
    assert g.adj[(C, 0)][(V, 2)] == Fraction(1, 2)


# ------------------------------------------------------------------- res


def test_res_of_two_triangles_matches_known_edge_set():
    g = build_res(two_triangles_instance())
    # clause order: hard h1..h7 are nodes 0..6, softs s1..s4 are 7..10
    edges = {(u[1], v[1]) for u, v, _ in g.edges()}
    expected = {
        (0, 1),  # h1-h2
        (1, 6),  # h2-h7
        (4, 6),  # h7-h5
        (3, 4),  # h5-h4
        (0, 2),  # h1-h3
        (1, 2),  # h2-h3
        (4, 5),  # h5-h6
        (3, 5),  # h4-h6
        (0, 7),  # h1-s1
        (1, 8),  # h2-s2
        (4, 10),  # h5-s4
        (3, 9),  # h4-s3
    }
    assert edges == expected
    weights = {(u[1], v[1]): w for u, v, w in g.edges()}
    assert weights[(0, 7)] == 1  # unit resolvent
    assert weights[(0, 1)] == Fraction(1, 2)


def test_res_skips_pairs_whose_resolvents_are_all_trivial():
    inst = MaxSatInstance(2, hard=[(1, 2), (-1, -2)], soft=[], top=1)
    assert build_res(inst).edges() == []


def test_res_unit_against_binary():
    inst = MaxSatInstance(2, hard=[(1, 2)], soft=[SoftClause((-1,), 1)], top=2)
    g = build_res(inst)
    assert g.edges() == [((C, 0), (C, 1), Fraction(1))]


def test_res_contradicting_units_keep_a_clamped_edge():
    inst = MaxSatInstance(1, hard=[(1,)], soft=[SoftClause((-1,), 1)], top=2)
    g = build_res(inst)
    assert g.edges() == [((C, 0), (C, 1), Fraction(1))]


def test_res_pair_cap_raises():
    inst = two_triangles_instance()
    with pytest.raises(ResolutionGraphTooLarge):
        build_res(inst, max_pairs=2)


def test_res_recomputed_resolvents_are_never_trivial():
    from partmax.cnf import TAUTOLOGY, resolve

    inst = two_triangles_instance()
    clauses = list(inst.hard) + [s.lits for s in inst.soft]
    for u, v, w in build_res(inst).edges():
        c1, c2 = clauses[u[1]], clauses[v[1]]
        shared = [
            a for a in {abs(l) for l in c1} if (a in {abs(l) for l in c2})
            and ((a in c1) != (a in c2))
        ]
        resolvable = [a for a in {abs(l) for l in c1} & {abs(l) for l in c2}
                      if (a in c1 and -a in c2) or (-a in c1 and a in c2)]
        assert resolvable
        assert any(resolve(c1, c2, a) is not TAUTOLOGY for a in resolvable)


# ----------------------------------------------------------- communities


def two_disjoint_triangles_graph():
    g = WeightedGraph()
    for a, b in [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]:
        g.add_edge((V, a), (V, b), Fraction(1))
    return g


def test_two_disjoint_triangles_split_matches_exhaustive_search():
    g = two_disjoint_triangles_graph()
    best_q, best_part = best_modularity_partition(
        [(u, v, w) for u, v, w in g.edges()], g.nodes()
    )
    assert best_q == Fraction(1, 2)
    ca = detect_communities(g, seed=0)
    assert ca.n_communities == 2
    groups = {}
    for node, c in ca.communities.items():
        groups.setdefault(c, set()).add(node[1])
    assert set(map(frozenset, groups.values())) == {frozenset({1, 2, 3}), frozenset({4, 5, 6})}
    assert ca.q == pytest.approx(0.5)


def test_single_node_is_one_community():
    g = WeightedGraph()
    g.add_node((V, 1))
    ca = detect_communities(g, seed=0)
    assert ca.n_communities == 1
    assert ca.q == 0.0


def test_zero_weight_graph_gives_singletons():
    g = WeightedGraph()
    for v in (1, 2, 3):
        g.add_node((V, v))
    ca = detect_communities(g, seed=0)
    assert ca.n_communities == 3
    assert ca.q == 0.0


def test_vig_communities_of_two_triangles():
    inst = two_triangles_instance()
    ca = detect_communities(build_vig(inst), seed=0)
    groups = {}
    for node, c in ca.communities.items():
        groups.setdefault(c, set()).add(node[1])
    assert set(map(frozenset, groups.values())) == {frozenset({1, 2, 3}), frozenset({4, 5, 6})}


def test_vig_partitions_of_two_triangles():
    inst = two_triangles_instance()
    pinst = partition_by_graph(inst, "vig", seed=0)
    assert soft_blocks(pinst) == {frozenset({0, 1}), frozenset({2, 3})}


def test_res_partitions_of_two_triangles():
    inst = two_triangles_instance()
    pinst = partition_by_graph(inst, "res", seed=0)
    assert soft_blocks(pinst) == {frozenset({0}), frozenset({1}), frozenset({2, 3})}


def test_louvain_quality_not_below_singletons_and_phases_monotone():
    rng = random.Random(5)
    g = WeightedGraph()
    for _ in range(40):
        u, v = rng.sample(range(1, 15), 2)
        g.add_edge((V, min(u, v)), (V, max(u, v)), Fraction(1))
    ca = detect_communities(g, seed=1)
    singletons = {n: i for i, n in enumerate(sorted(g.adj))}
    assert ca.q >= modularity(g, singletons) - 1e-12
    assert all(b >= a - 1e-9 for a, b in zip(ca.phase_q, ca.phase_q[1:]))
    # reported q matches an exact recomputation
    exact = exact_modularity([(u, v, w) for u, v, w in g.edges()], ca.communities)
    assert ca.q == pytest.approx(float(exact))


def test_detect_communities_deterministic_per_seed():
    g = build_vig(two_triangles_instance())
    a = detect_communities(g, seed=3)
    b = detect_communities(g, seed=3)
    assert a.communities == b.communities and a.q == b.q


def test_derive_partitions_single_soft_any_representation():
    inst = MaxSatInstance(2, hard=[(1, 2)], soft=[SoftClause((-1,), 1)], top=2)
    for kind in ("vig", "cvig", "res"):
        pinst = partition_by_graph(inst, kind, seed=0)
        assert pinst.n_part == 1
        assert soft_blocks(pinst) == {frozenset({0})}


def test_derive_partitions_tie_breaks_to_lowest_community():
    # two equal-size communities; a soft clause straddling them evenly
    inst = MaxSatInstance(
        4,
        hard=[(1, 2), (3, 4)],
        soft=[SoftClause((1, 3), 1), SoftClause((-1,), 1), SoftClause((-3,), 1)],
        top=2,
    )
    g = build_vig(inst)
    ca = detect_communities(g, seed=0)
    pinst = derive_partitions(inst, ca, "vig")
    straddler = pinst.base.soft[0].part
    lower = min(
        pinst.base.soft[1].part, pinst.base.soft[2].part
    )
    assert straddler == lower


def test_graph_builds_are_order_insensitive():
    inst = two_triangles_instance()
    rng = random.Random(11)
    hard = list(inst.hard)
    rng.shuffle(hard)
    shuffled = MaxSatInstance(6, hard=hard, soft=list(inst.soft), top=8)
    for build in (build_vig,):
        a, b = build(inst), build(shuffled)
        assert {(u, v): w for u, v, w in a.edges()} == {(u, v): w for u, v, w in b.edges()}


def test_random_partition_properties():
    inst = two_triangles_instance()
    one = random_partition(inst, 1, seed=9)
    assert one.n_part == 1
    many = random_partition(inst, 40, seed=9)
    assert 1 <= many.n_part <= 4
    again = random_partition(inst, 3, seed=5)
    assert [s.part for s in again.base.soft] == [
        s.part for s in random_partition(inst, 3, seed=5).base.soft
    ]
    with pytest.raises(ValueError):
        random_partition(inst, 0, seed=1)


@given(st.integers(min_value=1, max_value=10), st.integers(min_value=0, max_value=50))
def test_random_partition_covers_softs(k, seed):
    inst = two_triangles_instance()
    pinst = random_partition(inst, k, seed=seed)
    pinst.validate()
    ids = sorted(i for ids in pinst.blocks().values() for i in ids)
    assert ids == [0, 1, 2, 3]
    assert pinst.n_part == len(pinst.blocks())


def test_dump_edges_format():
    inst = MaxSatInstance(2, hard=[(1, 2)], soft=[], top=1)
    out = dump_edges(build_vig(inst))
    assert out == "v1 v2 1\n"


def test_empty_soft_clause_gets_its_own_partition():
    inst = MaxSatInstance(
        2, hard=[(1, 2)], soft=[SoftClause((), 1), SoftClause((-1,), 1)], top=3
    )
    for kind in ("vig", "cvig", "res"):
        pinst = partition_by_graph(inst, kind, seed=0)
        pinst.validate()
        assert sorted(i for ids in pinst.blocks().values() for i in ids) == [0, 1]
