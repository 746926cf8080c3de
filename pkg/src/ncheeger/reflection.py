"""The boundary-free modified graph of a domain and its reflected random walk.

A walker on the closure that steps onto a boundary vertex z is sent straight
back into Omega along an edge of z chosen proportionally to its weight. The
effective chain on Omega is the simple random walk for the weights

    mu~(x, y) = mu(x, y) + sum_z mu(x, z) mu(z, y) / m'(z),

and the degree of every x in Omega is unchanged by the reflection.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from . import kernels
from .errors import InputError, InvalidStart, NCheegerError
from .graph import Domain, WeightedGraph, build_graph

WALK_BLOCK = 1 << 20


@dataclass(frozen=True)
class ModifiedGraph:
    domain: Domain
    weights: Mapping[tuple[str, str], Fraction] = field(repr=False)
    degrees: Mapping[str, Fraction] = field(repr=False)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.domain.omega

    def weight(self, x: str, y: str) -> Fraction:
        return self.weights.get((x, y), Fraction(0))

    def edges(self) -> list[tuple[str, str, Fraction]]:
        """Nonzero weights once per unordered pair, in vertex order."""
        order = {v: i for i, v in enumerate(self.vertices)}
        out = [(x, y, w) for (x, y), w in self.weights.items() if order[x] <= order[y]]
        out.sort(key=lambda e: (order[e[0]], order[e[1]]))
        return out


def build_modified_graph(domain: Domain) -> ModifiedGraph:
    graph = domain.graph
    omega = domain.omega_set
    acc: dict[tuple[str, str], Fraction] = {}

    for x in domain.omega:
        for y, w in graph.adjacency[x].items():
            if y in omega:
                acc[(x, y)] = acc.get((x, y), Fraction(0)) + w

    for z in domain.boundary:
        mz = domain.boundary_measure[z]
        inner = [(y, w) for y, w in graph.adjacency[z].items() if y in omega]
        for x, a in inner:
            for y, b in inner:
                acc[(x, y)] = acc.get((x, y), Fraction(0)) + a * b / mz

    weights = {k: v for k, v in acc.items() if v != 0}
    degrees = {x: Fraction(0) for x in domain.omega}
    for (x, _y), w in weights.items():
        degrees[x] += w
    for x in domain.omega:
        if degrees[x] != graph.degrees[x]:
            raise NCheegerError(
                f"modified degree of {x} is {degrees[x]}, expected {graph.degrees[x]}"
            )
    return ModifiedGraph(domain, MappingProxyType(weights), MappingProxyType(degrees))


def as_plain_graph(mg: ModifiedGraph) -> WeightedGraph:
    """The modified graph as an ordinary weighted graph on Omega.

    Raises DisconnectedGraph when the modified graph falls apart.
    """
    return build_graph(mg.edges())


def transition_probabilities(mg: ModifiedGraph) -> dict[tuple[str, str], Fraction]:
    """Exact one-step probabilities mu~(x, y) / m(x) of the reflected chain."""
    return {(x, y): w / mg.degrees[x] for (x, y), w in mg.weights.items()}


def _walk_tables(domain: Domain):
    """CSR neighbour tables over the closure with cumulative probabilities."""
    index = {v: i for i, v in enumerate(domain.closure)}
    omega = domain.omega_set
    pos = np.full(len(domain.closure), -1, dtype=np.int64)
    for k, x in enumerate(domain.omega):
        pos[index[x]] = k

    indptr = [0]
    nbr: list[int] = []
    cum: list[float] = []
    adj = domain.graph.adjacency
    for v in domain.closure:
        if v in omega:
            row = list(adj[v].items())
            total = domain.graph.degrees[v]
        else:
            row = [(y, w) for y, w in adj[v].items() if y in omega]
            total = domain.boundary_measure[v]
        acc = Fraction(0)
        for y, w in row:
            acc += w
            nbr.append(index[y])
            cum.append(float(acc / total))
        cum[-1] = 1.0
        indptr.append(len(nbr))
    return (
        np.array(indptr, dtype=np.int64),
        np.array(nbr, dtype=np.int64),
        np.array(cum, dtype=np.float64),
        pos,
        index,
    )


def simulate_reflected_walk(
    domain: Domain,
    start: str,
    steps: int,
    seed: int,
    use_numba: bool | None = None,
) -> dict[tuple[str, str], int]:
    """Empirical Omega-to-Omega transition counts of the reflected walk.

    Each effective step consumes two uniforms from a PCG64 stream seeded
    with ``seed``: one for the move out of x and one for the reflection,
    used only when the move lands on the boundary. Counts are therefore
    identical across runs and across the numba and fallback kernels.
    """
    if start not in domain.omega_set:
        raise InvalidStart(f"start vertex {start!r} is not in Omega")
    if int(steps) < 1:
        raise InputError("steps must be at least 1")
    if not 0 <= int(seed) < 1 << 64:
        raise InputError("seed must be a 64-bit unsigned integer")

    indptr, nbr, cum, pos, index = _walk_tables(domain)
    rng = np.random.Generator(np.random.PCG64(int(seed)))

    def blocks():
        left = int(steps)
        while left > 0:
            k = min(left, WALK_BLOCK)
            yield rng.random((k, 2))
            left -= k

    counts = kernels.reflected_walk(
        indptr, nbr, cum, pos, index[start], blocks(), len(domain.omega), use_numba
    )
    omega = domain.omega
    return {
        (omega[i], omega[j]): int(counts[i, j])
        for i, j in zip(*np.nonzero(counts))
    }
