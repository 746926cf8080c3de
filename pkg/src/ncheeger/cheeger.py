"""Exact Cheeger constants of domains, modified graphs and plain graphs.

Constants are found by exhaustive enumeration of two-block partitions and
returned together with every partition attaining them. Rational weights are
scaled to integers so the scan runs in the int64 kernels; the ratio itself is
rebuilt exactly as a Fraction.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import kernels
from .errors import (
    ConstantFunction,
    InputError,
    TooLargeForExhaustive,
    WrongUniverse,
    ZeroDenominator,
)
from .graph import Domain, Partition, WeightedGraph, as_vector, cut_weight, measure
from .reflection import ModifiedGraph, build_modified_graph

ENUMERATION_LIMIT = 24

H_NEUMANN = "hN"
H_TILDE = "hTilde"
H_CLASSICAL = "hG"


@dataclass(frozen=True)
class CheegerResult:
    value: Fraction
    minimizers: tuple[Partition, ...]
    universe: tuple[str, ...]
    kind: str

    @property
    def minimizer_set(self) -> frozenset[Partition]:
        return frozenset(self.minimizers)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for q in values:
        out = math.lcm(out, q.denominator)
    return out


def _scan_exact_python(W: list[list[int]], meas: list[int]):
    """Arbitrary-precision scan used only when the int64 bound fails."""
    n = len(meas)
    total = sum(meas)
    best = None
    masks: list[int] = []
    for free in range(1 << (n - 1)):
        mask = free << 1
        ms = sum(meas[i] for i in range(n) if mask >> i & 1)
        den = min(ms, total - ms)
        if den <= 0:
            continue
        cut = sum(
            W[i][j]
            for i in range(n)
            for j in range(i + 1, n)
            if (mask >> i & 1) != (mask >> j & 1)
        )
        if best is None or cut * best[1] < best[0] * den:
            best = (cut, den)
            masks = [mask]
        elif cut * best[1] == best[0] * den:
            masks.append(mask)
    if best is None:
        return -1, 1, []
    return best[0], best[1], masks


def _minimize(
    order: Sequence[str],
    weight: Callable[[str, str], Fraction],
    masses: Sequence[Fraction],
    kind: str,
    partition_kind: str,
    limit: int,
) -> CheegerResult:
    n = len(order)
    if n < 2:
        raise InputError("need at least two vertices to partition")
    if n > limit:
        raise TooLargeForExhaustive(
            f"{n} vertices exceed the exhaustive enumeration limit of {limit}"
        )
    rows = [[weight(x, y) if x != y else Fraction(0) for y in order] for x in order]
    scale = _lcm_denominators([q for row in rows for q in row] + list(masses))
    W = [[int(q * scale) for q in row] for row in rows]
    meas = [int(q * scale) for q in masses]
    if sum(map(sum, W)) * max(sum(meas), 1) < kernels.INT64_SAFE:
        num, den, masks = kernels.cut_scan(np.array(W, dtype=np.int64), np.array(meas, dtype=np.int64))
    else:
        num, den, masks = _scan_exact_python(W, meas)
    if num < 0:
        raise InputError("no partition has a positive measure on both sides")

    universe = frozenset(order)
    parts = []
    for mask in np.asarray(masks, dtype=np.int64).tolist():
        side = frozenset(order[i] for i in range(n) if mask >> i & 1)
        parts.append(Partition(universe, side, partition_kind))
    parts.sort(key=Partition.sort_key)
    return CheegerResult(Fraction(int(num), int(den)), tuple(parts), tuple(order), kind)


def h_neumann(domain: Domain, limit: int = ENUMERATION_LIMIT) -> CheegerResult:
    """Neumann Cheeger constant with all minimizing partitions of the closure."""
    order = sorted(domain.closure)
    omega = domain.omega_set
    adj = domain.graph.adjacency

    def weight(x: str, y: str) -> Fraction:
        if x in omega or y in omega:
            return adj[x].get(y, Fraction(0))
        return Fraction(0)

    deg = domain.graph.degrees
    masses = [deg[x] if x in omega else Fraction(0) for x in order]
    return _minimize(order, weight, masses, H_NEUMANN, "closure", limit)


def h_tilde(mg: ModifiedGraph, limit: int = ENUMERATION_LIMIT) -> CheegerResult:
    """Classical Cheeger constant of the modified graph, self-loops uncut."""
    order = sorted(mg.vertices)
    masses = [mg.degrees[x] for x in order]
    return _minimize(order, mg.weight, masses, H_TILDE, "omega", limit)


def h_classical(graph: WeightedGraph, limit: int = ENUMERATION_LIMIT) -> CheegerResult:
    order = sorted(graph.vertices)
    masses = [graph.degrees[x] for x in order]
    return _minimize(order, graph.weight, masses, H_CLASSICAL, "graph", limit)


# ---------------------------------------------------------------------------
# partition functionals
# ---------------------------------------------------------------------------


def closure_partition(domain: Domain, s: Iterable[str]) -> Partition:
    return Partition(domain.closure_set, frozenset(s), "closure")


def omega_partition(domain: Domain, a: Iterable[str]) -> Partition:
    return Partition(domain.omega_set, frozenset(a), "omega")


def eta(domain: Domain, partition: Partition) -> Fraction | float:
    """Cut over E_Omega divided by the smaller Omega-measure; inf if that is 0."""
    if partition.kind != "closure" or partition.universe != domain.closure_set:
        raise WrongUniverse("eta needs a partition of the closure")
    den = min(measure(domain, partition.side), measure(domain, partition.complement))
    if den == 0:
        return math.inf
    return cut_weight(domain, partition.side) / den


def zeta(mg: ModifiedGraph, partition: Partition) -> Fraction:
    """Modified-weight cut divided by the smaller measure; loops never cut."""
    if partition.kind != "omega" or partition.universe != mg.domain.omega_set:
        raise WrongUniverse("zeta needs a partition of Omega")
    a = partition.side
    cut = sum((w for (x, y), w in mg.weights.items() if x in a and y not in a), Fraction(0))
    deg = mg.degrees
    ma = sum((deg[x] for x in a), Fraction(0))
    mb = sum((deg[x] for x in partition.complement), Fraction(0))
    return cut / min(ma, mb)


def induced_partition(domain: Domain, partition: Partition) -> Partition:
    """``{S ∩ Omega, S^c ∩ Omega}`` for a closure partition with both parts meeting Omega."""
    return partition.restrict(domain.omega_set, "omega")


# ---------------------------------------------------------------------------
# Sobolev quotient, coarea, sweep
# ---------------------------------------------------------------------------


def _exact_values(domain: Domain, f) -> dict[str, Fraction]:
    vec = as_vector(f, domain.closure)
    return {v: Fraction(x) for v, x in zip(domain.closure, vec)}


def total_variation(domain: Domain, values: dict) -> Fraction:
    return sum((abs(values[x] - values[y]) * w for x, y, w in domain.edge_set), Fraction(0))


def weighted_median(values: Sequence, weights: Sequence):
    """Lower weighted median: least v with weight(<= v) >= half the total."""
    pairs = sorted(zip(values, weights), key=lambda p: p[0])
    total = sum(w for _, w in pairs)
    acc = 0
    for v, w in pairs:
        acc += w
        if 2 * acc >= total:
            return v
    return pairs[-1][0]


def sobolev_quotient(domain: Domain, f) -> Fraction:
    """Total variation over E_Omega divided by min_c sum |f - c| m on Omega."""
    values = _exact_values(domain, f)
    deg = domain.graph.degrees
    inner = [values[x] for x in domain.omega]
    if len(set(values.values())) == 1:
        raise ConstantFunction("f is constant on the closure")
    c = weighted_median(inner, [deg[x] for x in domain.omega])
    den = sum((abs(values[x] - c) * deg[x] for x in domain.omega), Fraction(0))
    if den == 0:
        raise ZeroDenominator("f is constant on Omega")
    return total_variation(domain, values) / den


def coarea_identity_check(domain: Domain, f) -> tuple[Fraction, Fraction]:
    """Both sides of the discrete coarea formula for f on the closure.

    The left side is the total variation over E_Omega; the right side sums,
    over consecutive distinct values a < b of f, (b - a) times the cut weight
    of the super-level set {f >= b}.
    """
    values = _exact_values(domain, f)
    lhs = total_variation(domain, values)
    levels = sorted(set(values.values()))
    rhs = Fraction(0)
    for a, b in zip(levels, levels[1:]):
        upper = [v for v, x in values.items() if x >= b]
        rhs += (b - a) * cut_weight(domain, upper)
    return lhs, rhs


def sweep_cut(domain: Domain, f) -> tuple[Partition, Fraction]:
    """Best eta over strict super-level sets of f and of -f.

    Level sets are ``{g >= t}`` for each distinct value t of g other than
    the smallest. The result bounds the Neumann Cheeger constant from above
    at any size.
    """
    vec = [float(x) for x in as_vector(f, domain.closure)]
    if len(set(vec)) < 2:
        raise ConstantFunction("f is constant")
    best: tuple[Partition, Fraction] | None = None
    for sign in (1.0, -1.0):
        g = [sign * x for x in vec]
        levels = sorted(set(g))
        for hi in levels[1:]:
            side = frozenset(v for v, x in zip(domain.closure, g) if x >= hi)
            part = closure_partition(domain, side)
            val = eta(domain, part)
            if val != math.inf and (best is None or val < best[1]):
                best = (part, val)
    if best is None:
        raise ConstantFunction("f is constant on Omega, every level set is degenerate")
    return best


# ---------------------------------------------------------------------------
# partition lifting and equality cases
# ---------------------------------------------------------------------------


def boundary_attachment(domain: Domain, p: Partition) -> dict[str, tuple[Fraction, Fraction]]:
    """``z -> (m_A(z), m_B(z))`` with A = ``p.side`` and B its complement."""
    if p.kind != "omega" or p.universe != domain.omega_set:
        raise WrongUniverse("attachment needs a partition of Omega")
    a = p.side
    adj = domain.graph.adjacency
    out = {}
    for z in domain.boundary:
        ma = mb = Fraction(0)
        for y, w in adj[z].items():
            if y in a:
                ma += w
            elif y in domain.omega_set:
                mb += w
        out[z] = (ma, mb)
    return out


def doubly_attached(attachment: dict[str, tuple[Fraction, Fraction]]) -> tuple[str, ...]:
    return tuple(z for z, (ma, mb) in attachment.items() if ma != 0 and mb != 0)


def _lift_parts(domain: Domain, p: Partition):
    att = boundary_attachment(domain, p)
    base = set(p.side)
    ties = []
    for z, (ma, mb) in att.items():
        if mb == 0 or (ma != 0 and ma > mb):
            base.add(z)
        elif ma == mb:
            ties.append(z)
    return base, tuple(ties)


def lift_partition(
    domain: Domain,
    p: Partition,
    select_ties: Callable[[tuple[str, ...]], Iterable[str]] | None = None,
) -> Partition:
    """Extend a partition {A, B} of Omega to the closure.

    Boundary vertices join the side they are more heavily attached to;
    those attached only to A join A. Vertices attached equally to both
    sides go to B unless ``select_ties`` picks them for A's side.
    """
    base, ties = _lift_parts(domain, p)
    if select_ties is not None:
        chosen = set(select_ties(ties))
        if not chosen <= set(ties):
            raise InputError("tie selector returned vertices outside the tie set")
        base |= chosen
    return closure_partition(domain, base)


def lift_partition_all(domain: Domain, p: Partition) -> list[Partition]:
    """Every lift, one per subset of the equally attached boundary vertices."""
    base, ties = _lift_parts(domain, p)
    out = []
    for k in range(len(ties) + 1):
        for combo in combinations(ties, k):
            out.append(closure_partition(domain, base | set(combo)))
    return out


def direct_cut(domain: Domain, p: Partition) -> Fraction:
    """Weight of original edges between the two blocks of an Omega partition."""
    a = p.side
    adj = domain.graph.adjacency
    return sum(
        (w for x in a for y, w in adj[x].items() if y in p.complement),
        Fraction(0),
    )


@dataclass(frozen=True)
class EqualityReport:
    """Outcome of one equality characterization on one domain.

    ``holds`` is the exact equality of constants, ``predicate`` the
    combinatorial condition; a consistent instance has the two equal.
    """

    holds: bool
    predicate: bool
    h_neumann: Fraction
    h_tilde: Fraction
    intersection: tuple[Partition, ...]
    violations: tuple[tuple[Partition, str, str], ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return self.holds == self.predicate


@dataclass(frozen=True)
class EqualityContext:
    domain: Domain
    modified: ModifiedGraph
    hn: CheegerResult
    ht: CheegerResult

    @property
    def induced(self) -> frozenset[Partition]:
        return frozenset(induced_partition(self.domain, s) for s in self.hn.minimizers)

    @property
    def intersection(self) -> tuple[Partition, ...]:
        induced = self.induced
        return tuple(p for p in self.ht.minimizers if p in induced)


def equality_context(domain: Domain, limit: int = ENUMERATION_LIMIT) -> EqualityContext:
    mg = build_modified_graph(domain)
    return EqualityContext(domain, mg, h_neumann(domain, limit), h_tilde(mg, limit))


def check_lower_equality(
    domain: Domain, limit: int = ENUMERATION_LIMIT, ctx: EqualityContext | None = None
) -> EqualityReport:
    """Decide ``h~ == hN`` directly and through the attachment condition."""
    ctx = ctx or equality_context(domain, limit)
    inter = ctx.intersection
    violations = []
    for p in inter:
        for z, (ma, mb) in boundary_attachment(domain, p).items():
            if ma != 0 and mb != 0:
                violations.append((p, z, f"m_A={ma}, m_B={mb}"))
    predicate = bool(inter) and not violations
    return EqualityReport(
        holds=ctx.ht.value == ctx.hn.value,
        predicate=predicate,
        h_neumann=ctx.hn.value,
        h_tilde=ctx.ht.value,
        intersection=inter,
        violations=tuple(violations),
    )


def check_upper_equality(
    domain: Domain, limit: int = ENUMERATION_LIMIT, ctx: EqualityContext | None = None
) -> EqualityReport:
    """Decide ``hN == 2 h~`` directly and through the attachment condition."""
    ctx = ctx or equality_context(domain, limit)
    inter = ctx.intersection
    violations = []
    for p in inter:
        dc = direct_cut(domain, p)
        if dc != 0:
            violations.append((p, "", f"direct edges between blocks weigh {dc}"))
        for z, (ma, mb) in boundary_attachment(domain, p).items():
            if ma != 0 and mb != 0 and ma != mb:
                violations.append((p, z, f"m_A={ma}, m_B={mb}"))
    predicate = bool(inter) and not violations
    return EqualityReport(
        holds=ctx.hn.value == 2 * ctx.ht.value,
        predicate=predicate,
        h_neumann=ctx.hn.value,
        h_tilde=ctx.ht.value,
        intersection=inter,
        violations=tuple(violations),
    )
