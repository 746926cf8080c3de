"""Weighted graphs, domains with vertex boundary, and partitions.

All weights and measures are exact :class:`fractions.Fraction` values.
Vertices are opaque strings kept in lexicographic order, which fixes the
iteration order of every derived structure.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from .errors import (
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

Rational = Fraction


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions, decimal strings or ``p/q`` strings exactly.

    Floats are converted through their shortest decimal repr, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return parse_rational(repr(value))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def parse_rational(token: str) -> Fraction:
    """Parse an integer, ``p/q`` or finite decimal token exactly."""
    text = token.strip()
    if not text or any(c.isspace() for c in text):
        raise InputError(f"malformed rational {token!r}")
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed rational {token!r}") from exc
    return q


def render_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class WeightedGraph:
    """Finite connected graph with a symmetric rational weight function."""

    vertices: tuple[str, ...]
    adjacency: Mapping[str, Mapping[str, Fraction]] = field(repr=False)
    degrees: Mapping[str, Fraction] = field(repr=False)

    def weight(self, u: str, v: str) -> Fraction:
        return self.adjacency[u].get(v, Fraction(0))

    def neighbors(self, u: str) -> Mapping[str, Fraction]:
        return self.adjacency[u]

    def degree(self, u: str) -> Fraction:
        return self.degrees[u]

    def edges(self) -> list[tuple[str, str, Fraction]]:
        """Each undirected edge once, ``u <= v``, in vertex order."""
        out = []
        for u in self.vertices:
            for v, w in self.adjacency[u].items():
                if u <= v:
                    out.append((u, v, w))
        return out

    def __contains__(self, v: object) -> bool:
        return v in self.adjacency

    def __len__(self) -> int:
        return len(self.vertices)


def build_graph(edges: Iterable[tuple[str, str, object]]) -> WeightedGraph:
    """Build a connected weighted graph from an undirected edge list.

    Weights may be anything :func:`to_rational` accepts. Self-loops are
    allowed and count once towards the degree of their vertex.
    """
    adj: dict[str, dict[str, Fraction]] = {}
    for u, v, w in edges:
        u, v = str(u), str(v)
        q = to_rational(w)
        if q <= 0:
            raise NonPositiveWeight(f"edge {{{u},{v}}} has weight {q}")
        if v in adj.get(u, {}):
            raise DuplicateEdge(f"edge {{{u},{v}}} listed twice")
        adj.setdefault(u, {})[v] = q
        adj.setdefault(v, {})[u] = q
    if not adj:
        raise InputError("graph has no edges")

    vertices = tuple(sorted(adj))
    frozen = {
        u: MappingProxyType({v: adj[u][v] for v in sorted(adj[u])}) for u in vertices
    }
    degrees = {u: sum(frozen[u].values(), Fraction(0)) for u in vertices}
    graph = WeightedGraph(vertices, MappingProxyType(frozen), MappingProxyType(degrees))
    if len(_reachable(graph, vertices[0], set(vertices))) != len(vertices):
        raise DisconnectedGraph("graph is not connected")
    return graph


def _reachable(graph: WeightedGraph, start: str, allowed: set[str]) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in graph.adjacency[u]:
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


@dataclass(frozen=True)
class Domain:
    """A vertex subset Omega together with its vertex boundary.

    ``edge_set`` holds every edge with at least one endpoint in Omega as
    ``(x, y, weight)``; edges joining two boundary vertices are absent.
    """

    graph: WeightedGraph
    omega: tuple[str, ...]
    boundary: tuple[str, ...]
    closure: tuple[str, ...]
    boundary_measure: Mapping[str, Fraction] = field(repr=False)
    edge_set: tuple[tuple[str, str, Fraction], ...] = field(repr=False)
    omega_set: frozenset[str] = field(repr=False, compare=False)
    closure_set: frozenset[str] = field(repr=False, compare=False)

    def total_measure(self) -> Fraction:
        return sum((self.graph.degrees[x] for x in self.omega), Fraction(0))


def build_domain(graph: WeightedGraph, omega: Iterable[str]) -> Domain:
    omega_set = set(omega)
    unknown = sorted(v for v in omega_set if v not in graph)
    if unknown:
        raise UnknownVertex(f"vertices not in graph: {', '.join(unknown)}")
    if len(omega_set) < 2:
        raise OmegaTooSmall("Omega needs at least two vertices")

    boundary_measure: dict[str, Fraction] = {}
    for x in omega_set:
        for z, w in graph.adjacency[x].items():
            if z not in omega_set:
                boundary_measure[z] = boundary_measure.get(z, Fraction(0)) + w
    if not boundary_measure:
        raise EmptyVertexBoundary("Omega has no vertex boundary")

    order = graph.vertices
    omega_t = tuple(v for v in order if v in omega_set)
    boundary_t = tuple(v for v in order if v in boundary_measure)
    closure_t = tuple(v for v in order if v in omega_set or v in boundary_measure)

    edge_set = []
    for x, y, w in graph.edges():
        if x in omega_set or y in omega_set:
            edge_set.append((x, y, w))
    return Domain(
        graph=graph,
        omega=omega_t,
        boundary=boundary_t,
        closure=closure_t,
        boundary_measure=MappingProxyType({z: boundary_measure[z] for z in boundary_t}),
        edge_set=tuple(edge_set),
        omega_set=frozenset(omega_t),
        closure_set=frozenset(closure_t),
    )


def _check_subset(domain: Domain, s: Iterable[str]) -> frozenset[str]:
    s = frozenset(s)
    closure = domain.closure_set
    bad = sorted(v for v in s if v not in closure)
    if bad:
        raise UnknownVertex(f"vertices outside the closure: {', '.join(bad)}")
    return s


def measure(domain: Domain, s: Iterable[str]) -> Fraction:
    """m(S ∩ Omega) with degrees taken in the full graph."""
    s = _check_subset(domain, s)
    omega = domain.omega_set
    deg = domain.graph.degrees
    return sum((deg[x] for x in s if x in omega), Fraction(0))


def cut_weight(domain: Domain, s: Iterable[str]) -> Fraction:
    """Weight of the edges of ``domain.edge_set`` separating S from its complement."""
    s = _check_subset(domain, s)
    if not s or len(s) == len(domain.closure):
        raise EmptyOrFullSubset("S must be a nonempty proper subset of the closure")
    total = Fraction(0)
    for x, y, w in domain.edge_set:
        if (x in s) != (y in s):
            total += w
    return total


@dataclass(frozen=True, eq=False)
class Partition:
    """Unordered two-block split ``{side, universe - side}``.

    ``kind`` names the universe (``"omega"``, ``"closure"`` or ``"graph"``).
    Equality and hashing use the canonical key, the block that does not
    contain the lexicographically smallest universe vertex.
    """

    universe: frozenset[str]
    side: frozenset[str]
    kind: str = "closure"

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "side", frozenset(self.side))
        if not self.side <= self.universe:
            raise WrongUniverse("partition side is not inside its universe")
        if not self.side or self.side == self.universe:
            raise EmptyOrFullSubset("partition side must be nonempty and proper")

    @property
    def complement(self) -> frozenset[str]:
        return self.universe - self.side

    @property
    def key(self) -> frozenset[str]:
        anchor = min(self.universe)
        return self.complement if anchor in self.side else self.side

    def blocks(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Both blocks sorted; the one holding the smallest vertex first."""
        key = self.key
        return tuple(sorted(self.universe - key)), tuple(sorted(key))

    def restrict(self, vertices: Iterable[str], kind: str) -> Partition:
        """The induced partition ``{side ∩ V, complement ∩ V}``."""
        sub = frozenset(vertices)
        return Partition(sub, self.side & sub, kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (self.kind, self.universe, self.key) == (other.kind, other.universe, other.key)

    def __hash__(self) -> int:
        return hash((self.kind, self.universe, self.key))

    def __repr__(self) -> str:
        a, b = self.blocks()
        return f"Partition({self.kind}: {{{','.join(a)}}} | {{{','.join(b)}}})"

    def sort_key(self) -> tuple:
        a, b = self.blocks()
        return (len(b), b, a)


def as_vector(values, order: Sequence[str]) -> list:
    """Values in ``order`` from either a mapping or an aligned sequence."""
    if isinstance(values, Mapping):
        missing = [v for v in order if v not in values]
        if missing:
            raise UnknownVertex(f"function undefined at {', '.join(missing)}")
        return [values[v] for v in order]
    seq = list(values)
    if len(seq) != len(order):
        raise InputError(f"expected {len(order)} values, got {len(seq)}")
    return seq
