from __future__ import annotations

from fractions import Fraction as F

import pytest

from ncheeger.errors import (
    DisconnectedGraph,
    DuplicateEdge,
    EmptyOrFullSubset,
    EmptyVertexBoundary,
    InputError,
    NonPositiveWeight,
    OmegaTooSmall,
    UnknownVertex,
    WrongUniverse,
)
from ncheeger.graph import (
    Partition,
    as_vector,
    build_domain,
    build_graph,
    cut_weight,
    measure,
    parse_rational,
    to_rational,
)

from .conftest import triangle_graph, path


def test_triangle_degrees():
    g = build_graph([("v1", "v2", 1), ("v2", "v3", 1), ("v1", "v3", 1)])
    assert dict(g.degrees) == {"v1": 2, "v2": 2, "v3": 2}


def test_path_degrees():
    g = path(3)
    assert (g.degree("v1"), g.degree("v2"), g.degree("v3")) == (1, 2, 1)


def test_repeated_pair_rejected():
    with pytest.raises(DuplicateEdge):
        build_graph([("v1", "v2", 1), ("v2", "v1", 2)])


@pytest.mark.parametrize("w", [0, -1, F(-1, 2)])
def test_nonpositive_weight(w):
    with pytest.raises(NonPositiveWeight):
        build_graph([("a", "b", w)])


def test_disconnected():
    with pytest.raises(DisconnectedGraph):
        build_graph([("a", "b", 1), ("c", "d", 1)])


def test_empty_graph():
    with pytest.raises(InputError):
        build_graph([])


def test_self_loop_counts_once():
    g = build_graph([("a", "a", F(1, 2)), ("a", "b", 1)])
    assert g.degree("a") == F(3, 2)
    assert g.degree("b") == 1
    assert ("a", "a", F(1, 2)) in g.edges()


def test_edges_listed_once():
    g = triangle_graph(10)
    assert sorted(g.edges()) == [("v1", "v2", 10), ("v1", "v3", 1), ("v2", "v3", 10)]


@pytest.mark.parametrize(
    "token,value",
    [("3", F(3)), ("2/6", F(1, 3)), ("0.5", F(1, 2)), ("-1.25", F(-5, 4)), ("1e-2", F(1, 100))],
)
def test_parse_rational(token, value):
    assert parse_rational(token) == value


@pytest.mark.parametrize("token", ["", "a", "1/0", "nan", "inf", "1 /2"])
def test_parse_rational_rejects(token):
    with pytest.raises(InputError):
        parse_rational(token)


def test_float_goes_through_repr():
    assert to_rational(0.1) == F(1, 10)


def test_domain_path_ends(path_ends):
    assert path_ends.boundary == ("v2",)
    assert path_ends.boundary_measure["v2"] == 2
    assert path_ends.closure == ("v1", "v2", "v3")
    assert sorted((u, v) for u, v, _ in path_ends.edge_set) == [("v1", "v2"), ("v2", "v3")]


def test_domain_p4(p4):
    assert p4.boundary == ("v1", "v4")
    assert p4.boundary_measure["v1"] == 1
    assert p4.boundary_measure["v4"] == 1


def test_full_omega_has_no_boundary():
    g = build_graph([("v1", "v2", 1), ("v2", "v3", 1), ("v1", "v3", 1)])
    with pytest.raises(EmptyVertexBoundary):
        build_domain(g, ["v1", "v2", "v3"])


def test_domain_errors():
    g = path(3)
    with pytest.raises(OmegaTooSmall):
        build_domain(g, [])
    with pytest.raises(OmegaTooSmall):
        build_domain(g, ["v1"])
    with pytest.raises(UnknownVertex):
        build_domain(g, ["v1", "x"])


def test_measure_examples(path_ends, tri10):
    assert measure(path_ends, ["v1"]) == 1
    assert measure(path_ends, []) == 0
    assert measure(tri10, ["v1", "v2"]) == 11


def test_cut_examples(path_ends, tri10):
    assert cut_weight(path_ends, ["v1"]) == 1
    assert cut_weight(path_ends, ["v1", "v2"]) == 1
    assert cut_weight(tri10, ["v1"]) == 11


def test_cut_rejects_trivial_subsets(path_ends):
    with pytest.raises(EmptyOrFullSubset):
        cut_weight(path_ends, [])
    with pytest.raises(EmptyOrFullSubset):
        cut_weight(path_ends, ["v1", "v2", "v3"])
    with pytest.raises(UnknownVertex):
        cut_weight(path_ends, ["zz"])


def test_cut_ignores_boundary_boundary_edges():
    g = build_graph([("a", "x", 1), ("x", "y", 5), ("y", "b", 1), ("a", "b", 1)])
    d = build_domain(g, ["a", "b"])
    assert cut_weight(d, ["x"]) == 1
    assert cut_weight(d, ["a", "x"]) == 1
    assert cut_weight(d, ["a", "y"]) == 3


def test_partition_equality_is_unordered():
    u = {"a", "b", "c"}
    assert Partition(u, {"a"}) == Partition(u, {"b", "c"})
    assert hash(Partition(u, {"a"})) == hash(Partition(u, {"b", "c"}))
    assert Partition(u, {"a"}) != Partition(u, {"b"})
    assert Partition(u, {"a"}, "omega") != Partition(u, {"a"}, "closure")


def test_partition_blocks_and_restrict():
    p = Partition({"a", "b", "c", "d"}, {"b", "d"})
    assert p.blocks() == (("a", "c"), ("b", "d"))
    assert p.restrict({"a", "b"}, "omega") == Partition({"a", "b"}, {"a"}, "omega")


def test_partition_validation():
    with pytest.raises(EmptyOrFullSubset):
        Partition({"a", "b"}, set())
    with pytest.raises(EmptyOrFullSubset):
        Partition({"a", "b"}, {"a", "b"})
    with pytest.raises(WrongUniverse):
        Partition({"a", "b"}, {"z"})


def test_as_vector():
    assert as_vector({"a": 1, "b": 2}, ("b", "a")) == [2, 1]
    assert as_vector([5, 6], ("a", "b")) == [5, 6]
    with pytest.raises(UnknownVertex):
        as_vector({"a": 1}, ("a", "b"))
    with pytest.raises(InputError):
        as_vector([1], ("a", "b"))
