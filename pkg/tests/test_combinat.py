import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_min_matching, brute_min_tjoin
from tsppath.combinat import (CombinatError, EdgeMultiset, euler_path,
                              is_hamiltonian_path, min_perfect_matching,
                              min_tjoin, mst, shortcut, tree_path, walk_cost,
                              wrong_parity_set)
from tsppath.instance import gen_random_euclidean, gen_random_graphical, metric_from_graph


def test_mst_triangle_cost_and_determinism(triangle):
    tree = mst(triangle)
    assert tree.cost(triangle) == 2
    assert len(tree) == 2
    assert mst(triangle) == tree  # deterministic tie-breaking


def test_mst_four_cycle_matches_enumeration(c4):
    # oracle: all 16 spanning trees of K4 enumerated directly
    from oracles import enumerate_spanning_trees
    edges = c4.edges()
    best = min(sum(c4.cost[u, v] for u, v in t)
               for t in enumerate_spanning_trees(4, edges))
    assert best == 3
    assert mst(c4).cost(c4) == best


def test_mst_two_vertices():
    inst = metric_from_graph(2, [(0, 1)], 0, 1)
    assert mst(inst).unique_edges() == [(0, 1)]


def test_mst_beats_random_spanning_trees():
    inst = gen_random_euclidean(9, seed=2)
    best = mst(inst).cost(inst)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        # random spanning tree by random Prim order
        order = rng.permutation(inst.n)
        in_tree = {int(order[0])}
        cost = 0.0
        for v in order[1:]:
            u = int(rng.choice(sorted(in_tree)))
            cost += inst.cost[u, int(v)]
            in_tree.add(int(v))
        assert best <= cost + 1e-12


def test_wrong_parity_path_tree(triangle):
    tree = EdgeMultiset([(0, 1), (1, 2)])
    assert wrong_parity_set(tree, 0, 2) == frozenset()


def test_wrong_parity_star():
    # star at s over {s,a,t}: s even endpoint, a odd internal, t odd endpoint
    inst = metric_from_graph(3, [(0, 1), (1, 2), (0, 2)], 0, 2)
    tree = EdgeMultiset([(0, 1), (0, 2)])
    assert wrong_parity_set(tree, 0, 2) == frozenset({0, 1})
    assert inst.n == 3


def test_wrong_parity_c4_tree():
    # tree {sa, ta, tb}: degrees s=1, a=2, t=2, b=1; t even endpoint, b odd internal
    tree = EdgeMultiset([(0, 1), (1, 2), (2, 3)])
    assert wrong_parity_set(tree, 0, 2) == frozenset({2, 3})


def test_wrong_parity_always_even_cardinality():
    for seed in range(20):
        inst = gen_random_graphical(9, 0.4, seed)
        assert len(wrong_parity_set(mst(inst), inst.s, inst.t)) % 2 == 0


def test_matching_forced_pair(c4):
    m = min_perfect_matching([3, 2], c4)
    assert m.unique_edges() == [(2, 3)]
    assert m.cost(c4) == 1


def test_matching_empty():
    inst = gen_random_graphical(6, 0.5, 0)
    m = min_perfect_matching([], inst)
    assert len(m) == 0 and m.cost(inst) == 0.0


def test_matching_odd_rejected(c4):
    with pytest.raises(CombinatError):
        min_perfect_matching([0, 1, 2], c4)


def test_matching_cap_enforced():
    inst = gen_random_euclidean(26, seed=0)
    with pytest.raises(CombinatError, match="cap"):
        min_perfect_matching(range(26), inst)


@pytest.mark.parametrize("seed", range(6))
def test_matching_equals_bruteforce(seed):
    inst = gen_random_euclidean(8, seed=seed)
    verts = [0, 1, 2, 4, 6, 7]
    m = min_perfect_matching(verts, inst)
    assert m.cost(inst) == pytest.approx(brute_min_matching(verts, inst.cost))
    assert sorted(v for e in m.unique_edges() for v in e) == verts


def test_tjoin_empty(c4):
    assert len(min_tjoin([], c4)) == 0


def test_tjoin_endpoints_triangle(triangle):
    j = min_tjoin([0, 2], triangle)
    assert j.unique_edges() == [(0, 2)]
    assert j.cost(triangle) == 1


@pytest.mark.parametrize("seed", range(4))
def test_tjoin_matches_exhaustive_edge_subsets(seed):
    rng = np.random.default_rng(seed)
    inst = gen_random_euclidean(5, seed=seed)
    T = {0, 1, 2, 3} if seed % 2 else {1, 4}
    j = min_tjoin(T, inst)
    assert j.odd_degree_vertices() == frozenset(T)
    assert j.cost(inst) == pytest.approx(brute_min_tjoin(5, T, inst.cost))


def test_tjoin_odd_set_is_exactly_t():
    for seed in range(10):
        inst = gen_random_graphical(10, 0.4, seed)
        rng = np.random.default_rng(seed)
        size = 2 * int(rng.integers(1, 5))
        T = set(map(int, rng.choice(10, size=size, replace=False)))
        assert min_tjoin(T, inst).odd_degree_vertices() == frozenset(T)


def test_no_two_edge_shortcut_improves_matched_pairs():
    # metric => direct edges beat any relay through a third vertex
    for seed in range(5):
        inst = gen_random_graphical(10, 0.4, seed)
        T = wrong_parity_set(mst(inst), inst.s, inst.t)
        m = min_perfect_matching(T, inst)
        for u, v in m.unique_edges():
            for w in range(inst.n):
                if w not in (u, v):
                    assert inst.cost[u, v] <= inst.cost[u, w] + inst.cost[w, v] + 1e-9


def test_tree_path_direct(triangle):
    tree = EdgeMultiset([(0, 1), (1, 2)])
    assert tree_path(tree, 0, 2) == [(0, 1), (1, 2)]


def test_tree_path_star_complement():
    tree = EdgeMultiset([(0, 1), (1, 2), (1, 3)])
    path = tree_path(tree, 0, 2)
    assert path == [(0, 1), (1, 2)]
    rest = tree.copy()
    for u, v in path:
        rest.remove(u, v)
    assert rest.unique_edges() == [(1, 3)]


def test_tree_path_c4_complement_is_wrong_parity_join():
    tree = EdgeMultiset([(0, 1), (1, 2), (2, 3)])
    path = tree_path(tree, 0, 2)
    assert path == [(0, 1), (1, 2)]
    rest = tree.copy()
    for u, v in path:
        rest.remove(u, v)
    assert rest.odd_degree_vertices() == wrong_parity_set(tree, 0, 2)


def test_euler_path_simple():
    mg = EdgeMultiset([(0, 1), (1, 2)])
    assert euler_path(mg, 0, 2) == [0, 1, 2]


def test_euler_path_c4_multigraph():
    # H u M on the 4-cycle: {sa, ta, tb, tb}: degrees s1, a2, b2, t3
    mg = EdgeMultiset([(0, 1), (1, 2)])
    mg.add(2, 3, 2)
    walk = euler_path(mg, 0, 2)
    assert walk[0] == 0 and walk[-1] == 2 and len(walk) == 5
    # every multiedge used exactly once
    used = EdgeMultiset()
    for a, b in zip(walk, walk[1:]):
        used.add(a, b)
    assert used == mg


def test_euler_path_disconnected():
    mg = EdgeMultiset([(0, 1), (2, 3), (2, 3)])
    mg.add(0, 1)
    mg2 = EdgeMultiset([(0, 1), (1, 0), (2, 3), (3, 2)])
    with pytest.raises(CombinatError):
        euler_path(mg2, 0, 1)


def test_euler_path_wrong_parity_names_vertex():
    mg = EdgeMultiset([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(CombinatError, match=r"\[0, 2\]"):
        euler_path(mg, 0, 2)


def test_shortcut_identity():
    assert shortcut([0, 1, 2], 0, 2) == [0, 1, 2]


def test_shortcut_c4_walk(c4):
    out = shortcut([0, 1, 2, 3, 2], 0, 2)
    assert out == [0, 1, 3, 2]
    assert walk_cost(out, c4) == 4


def test_shortcut_repeat_skipped():
    assert shortcut([0, 1, 3, 1, 2], 0, 2) == [0, 1, 3, 2]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(5, 9), st.integers(8, 20))
def test_shortcut_never_costs_more_than_walk(seed, n, extra):
    inst = gen_random_graphical(n, 0.45, seed % 1000)
    rng = np.random.default_rng(seed)
    middle = list(rng.integers(0, n, size=extra))
    internal = [v for v in range(n) if v not in (inst.s, inst.t)]
    walk = [inst.s, *middle, *internal, inst.t]
    out = shortcut(walk, inst.s, inst.t)
    assert is_hamiltonian_path(out, inst)
    assert walk_cost(out, inst) <= walk_cost(walk, inst) + 1e-9
