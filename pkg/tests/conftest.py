from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from ncheeger.errors import InputError
from ncheeger.graph import build_domain, build_graph
from ncheeger.reflection import as_plain_graph, build_modified_graph

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

F = Fraction


def path(n: int, weight=1):
    names = [f"v{i}" for i in range(1, n + 1)]
    return build_graph([(a, b, F(weight)) for a, b in zip(names, names[1:])])


def triangle_graph(a):
    a = F(a)
    return build_graph([("v1", "v3", F(1)), ("v1", "v2", a), ("v2", "v3", a)])


@pytest.fixture
def path_ends():
    """Unit path v1-v2-v3 with Omega = {v1, v3}."""
    return build_domain(path(3), ["v1", "v3"])


@pytest.fixture
def tri10():
    """Triangle with weights 1, 10, 10 and Omega = {v1, v3}."""
    return build_domain(triangle_graph(10), ["v1", "v3"])


@pytest.fixture
def p3():
    """Unit path v1-v2-v3 with Omega = {v1, v2}."""
    return build_domain(path(3), ["v1", "v2"])


@pytest.fixture
def p4():
    """Unit path v1-v2-v3-v4 with Omega = {v2, v3}."""
    return build_domain(path(4), ["v2", "v3"])


weights = st.builds(F, st.integers(1, 12), st.integers(1, 4))


@st.composite
def graphs(draw, min_n: int = 2, max_n: int = 7):
    n = draw(st.integers(min_n, max_n))
    names = [f"v{i}" for i in range(1, n + 1)]
    edges = {}
    # a random spanning tree keeps the graph connected
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        edges[(names[j], names[i])] = draw(weights)
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    for i, j in extra:
        if i != j:
            key = (names[min(i, j)], names[max(i, j)])
            edges.setdefault(key, draw(weights))
    return build_graph([(u, v, w) for (u, v), w in edges.items()])


@st.composite
def domains(draw, min_n: int = 3, max_n: int = 7, connected_modified: bool = False):
    g = draw(graphs(min_n, max_n))
    mask = draw(st.lists(st.booleans(), min_size=len(g), max_size=len(g)))
    omega = [v for v, keep in zip(g.vertices, mask) if keep]
    try:
        d = build_domain(g, omega)
        if connected_modified:
            as_plain_graph(build_modified_graph(d))
    except InputError:
        assume(False)
    return d


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
