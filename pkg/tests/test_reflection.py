from __future__ import annotations

from fractions import Fraction as F

import pytest

from ncheeger import kernels
from ncheeger.errors import DisconnectedGraph, InputError, InvalidStart
from ncheeger.graph import build_domain, build_graph
from ncheeger.reflection import (
    as_plain_graph,
    build_modified_graph,
    simulate_reflected_walk,
    transition_probabilities,
)

from .conftest import triangle_graph


def test_path_ends_weights(path_ends):
    mg = build_modified_graph(path_ends)
    assert mg.weight("v1", "v3") == F(1, 2)
    assert mg.weight("v1", "v1") == F(1, 2)
    assert mg.weight("v3", "v3") == F(1, 2)
    assert mg.edges() == [("v1", "v1", F(1, 2)), ("v1", "v3", F(1, 2)), ("v3", "v3", F(1, 2))]
    assert dict(mg.degrees) == {"v1": 1, "v3": 1}


@pytest.mark.parametrize("a", [F(1), F(10), F(3, 7), F(100)])
def test_tri10_bridge_weight(a):
    mg = build_modified_graph(build_domain(triangle_graph(a), ["v1", "v3"]))
    assert mg.weight("v1", "v3") == 1 + a / 2
    assert mg.weight("v1", "v1") == a / 2
    assert mg.degrees["v1"] == 1 + a


def test_tri10_at_ten(tri10):
    mg = build_modified_graph(tri10)
    assert mg.edges() == [("v1", "v1", 5), ("v1", "v3", 6), ("v3", "v3", 5)]
    assert dict(mg.degrees) == {"v1": 11, "v3": 11}


def test_p4_reflects_to_origin(p4):
    mg = build_modified_graph(p4)
    assert mg.weight("v2", "v3") == 1
    assert mg.weight("v2", "v2") == 1
    assert mg.weight("v3", "v3") == 1


def test_no_boundary_paths_only_adds_loops():
    g = build_graph([("a", "b", 2), ("b", "c", 3), ("a", "x", 1), ("c", "y", F(1, 2))])
    d = build_domain(g, ["a", "b", "c"])
    mg = build_modified_graph(d)
    assert mg.weight("a", "b") == 2 and mg.weight("b", "c") == 3
    assert mg.weight("a", "c") == 0
    assert mg.weight("a", "a") == 1 and mg.weight("c", "c") == F(1, 2)


def test_modified_may_disconnect():
    g = build_graph([("a", "x", 1), ("x", "y", 1), ("y", "b", 1)])
    mg = build_modified_graph(build_domain(g, ["a", "b"]))
    with pytest.raises(DisconnectedGraph):
        as_plain_graph(mg)


def test_transition_rows_sum_to_one(tri10):
    probs = transition_probabilities(build_modified_graph(tri10))
    assert probs[("v1", "v3")] == F(6, 11)
    for x in tri10.omega:
        assert sum(p for (u, _), p in probs.items() if u == x) == 1


def test_walk_single_step(path_ends):
    counts = simulate_reflected_walk(path_ends, "v1", 1, seed=0)
    assert sum(counts.values()) == 1
    assert next(iter(counts))[0] == "v1"


def test_walk_deterministic(tri10):
    a = simulate_reflected_walk(tri10, "v3", 5000, seed=12)
    b = simulate_reflected_walk(tri10, "v3", 5000, seed=12)
    assert a == b
    assert a != simulate_reflected_walk(tri10, "v3", 5000, seed=13)


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not importable")
def test_walk_same_counts_on_both_backends(tri10):
    a = simulate_reflected_walk(tri10, "v1", 30000, seed=4, use_numba=True)
    b = simulate_reflected_walk(tri10, "v1", 30000, seed=4, use_numba=False)
    assert a == b


def test_walk_frequencies_near_exact(path_ends):
    counts = simulate_reflected_walk(path_ends, "v1", 200_000, seed=1)
    row = counts[("v1", "v1")] + counts[("v1", "v3")]
    assert abs(counts[("v1", "v3")] / row - 0.5) < 0.01


def test_walk_never_records_boundary():
    g = build_graph([("a", "z", 1), ("z", "b", 3), ("a", "b", 1), ("b", "w", 2)])
    d = build_domain(g, ["a", "b"])
    counts = simulate_reflected_walk(d, "a", 10000, seed=2)
    assert {x for pair in counts for x in pair} <= {"a", "b"}
    assert sum(counts.values()) == 10000


def test_walk_errors(path_ends):
    with pytest.raises(InvalidStart):
        simulate_reflected_walk(path_ends, "v2", 10, seed=0)
    with pytest.raises(InputError):
        simulate_reflected_walk(path_ends, "v1", 0, seed=0)
    with pytest.raises(InputError):
        simulate_reflected_walk(path_ends, "v1", 10, seed=-1)
