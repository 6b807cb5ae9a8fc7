import json

import numpy as np
import pytest

from tsppath.instance import (GapFamilySpec, Instance, InstanceError,
                              from_document, gen_gap_family,
                              gen_random_euclidean, gen_random_graphical,
                              metric_from_graph, to_document, validate_metric)


def test_path_graph_metric():
    inst = metric_from_graph(3, [(0, 1), (1, 2)], 0, 2)
    assert inst.cost[0, 2] == 2
    assert inst.cost[0, 1] == 1
    assert inst.is_graphical


def test_four_cycle_metric(c4):
    assert c4.cost[0, 2] == 2
    for u, v in [(0, 1), (1, 2), (2, 3), (3, 0)]:
        assert c4.cost[u, v] == 1


def test_disconnected_graph_rejected():
    with pytest.raises(InstanceError, match="metric undefined"):
        metric_from_graph(4, [(0, 1), (1, 2)], 0, 2)


def test_same_endpoints_rejected():
    with pytest.raises(InstanceError):
        metric_from_graph(3, [(0, 1), (1, 2)], 1, 1)


def test_validate_metric_accepts_bfs_output(c4):
    assert validate_metric(c4) == []


def test_validate_metric_detects_violation():
    cost = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
    inst = Instance(n=3, cost=cost, s=0, t=2)
    violations = validate_metric(inst)
    assert (0, 1, 2) in violations


def test_validate_metric_perturbation_reports_exactly_affected_triples(c4):
    # independent oracle: raw triple scan over the perturbed matrix
    cost = c4.cost.copy()
    cost[1, 3] += 10.0
    cost[3, 1] += 10.0
    inst = Instance(n=4, cost=cost, s=0, t=2)
    expected = set()
    for u in range(4):
        for v in range(4):
            for w in range(4):
                if u != v and v != w and u != w:
                    if cost[u, w] > cost[u, v] + cost[v, w] + 1e-9:
                        expected.add((u, v, w))
    assert expected  # the perturbation must be visible
    assert set(validate_metric(inst)) == expected
    assert all(1 in (u, w) and 3 in (u, w) for u, _, w in expected)


@pytest.mark.parametrize("family,k,n", [
    ("circuit_fig1a", 1, 6),
    ("circuit_fig1a", 3, 12),
    ("path_fig1b", 1, 6),
    ("path_fig1b", 4, 12),
])
def test_gap_family_sizes(family, k, n):
    inst = gen_gap_family(GapFamilySpec(family, k))
    assert inst.n == n
    assert validate_metric(inst) == []
    assert inst.is_graphical


def test_gap_family_vertex_count_strictly_increasing():
    for family in ("circuit_fig1a", "path_fig1b"):
        sizes = [gen_gap_family(GapFamilySpec(family, k)).n for k in range(1, 6)]
        assert all(a < b for a, b in zip(sizes, sizes[1:]))


def test_gap_family_unknown_tag():
    with pytest.raises(InstanceError):
        gen_gap_family(GapFamilySpec("mystery", 2))


def test_gap_family_k_zero_rejected():
    with pytest.raises(InstanceError):
        gen_gap_family(GapFamilySpec("path_fig1b", 0))


def test_random_graphical_two_vertices():
    inst = gen_random_graphical(2, 0.0, seed=0)
    assert inst.cost[0, 1] == 1.0


def test_random_graphical_deterministic():
    a = gen_random_graphical(12, 0.3, seed=7)
    b = gen_random_graphical(12, 0.3, seed=7)
    assert np.array_equal(a.cost, b.cost)
    assert a.origin == b.origin


def test_random_graphical_valid_metric():
    inst = gen_random_graphical(12, 0.3, seed=7)
    assert validate_metric(inst) == []


def test_random_graphical_bad_probability():
    with pytest.raises(InstanceError):
        gen_random_graphical(5, 1.5, seed=0)


def test_random_euclidean_is_metric():
    inst = gen_random_euclidean(9, seed=3)
    assert validate_metric(inst, tol=1e-9) == []
    assert not inst.is_graphical


def test_metric_rederivation_idempotent():
    inst = gen_random_graphical(10, 0.4, seed=5)
    again = metric_from_graph(inst.n, list(inst.origin), inst.s, inst.t)
    assert np.array_equal(inst.cost, again.cost)


def test_document_roundtrip(c4):
    doc = to_document(c4)
    assert doc["version"] == 1
    # integer costs serialize as exact ints
    assert all(isinstance(v, int) for row in doc["cost"] for v in row)
    back = from_document(json.loads(json.dumps(doc)))
    assert np.array_equal(back.cost, c4.cost)
    assert back.origin == c4.origin
    assert (back.s, back.t) == (c4.s, c4.t)


def test_document_roundtrip_general_metric():
    inst = gen_random_euclidean(6, seed=1)
    back = from_document(json.loads(json.dumps(to_document(inst))))
    assert np.allclose(back.cost, inst.cost)
    assert back.origin is None
