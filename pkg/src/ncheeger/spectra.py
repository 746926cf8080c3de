"""Neumann, Dirichlet and plain graph Laplacian spectra.

Operators are assembled exactly in rationals and converted to floats only
when handed to the eigensolver. Every problem is a generalized symmetric
one, ``L v = lambda M v`` with ``M = diag(m)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ConstantFunction, NoConvergence, NonPositiveMass, NotSymmetric
from .graph import Domain, WeightedGraph, as_vector
from .reflection import ModifiedGraph, as_plain_graph

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100

NEUMANN_DIRECT = "neumann-direct"
NEUMANN_MODIFIED = "neumann-modified"
DIRICHLET = "dirichlet"
PLAIN = "plain"


@dataclass(frozen=True)
class SpectrumResult:
    """Ascending eigenvalues with M-orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    vertices: tuple[str, ...]
    convention: str
    residual: float
    sweeps: int

    @property
    def lambda1(self) -> float:
        """Second-smallest eigenvalue, reported even when it is zero."""
        return float(self.eigenvalues[1])

    def vector(self, k: int) -> dict[str, float]:
        return dict(zip(self.vertices, self.eigenvectors[:, k].tolist()))

    def __len__(self) -> int:
        return len(self.eigenvalues)


def symmetric_eigensolve(
    matrix,
    mass,
    tolerance: float = DEFAULT_TOL,
    *,
    vertices: tuple[str, ...] = (),
    convention: str = PLAIN,
    max_sweeps: int = MAX_SWEEPS,
    use_numba: bool | None = None,
) -> SpectrumResult:
    """Solve ``L v = lambda M v`` for symmetric L and positive diagonal M.

    The problem is symmetrized as ``M^-1/2 L M^-1/2`` and diagonalized by
    cyclic Jacobi sweeps until every off-diagonal entry is below
    ``tolerance`` (scaled by the largest entry when that exceeds one).
    """
    a = np.asarray(matrix, dtype=np.float64)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise NotSymmetric("matrix must be square")
    scale = max(1.0, float(np.abs(a).max()) if n else 1.0)
    if n and np.abs(a - a.T).max() > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric")

    m = np.asarray(mass, dtype=np.float64)
    if m.ndim == 2:
        if m.shape != (n, n) or np.count_nonzero(m - np.diag(np.diag(m))):
            raise NonPositiveMass("mass matrix must be diagonal")
        m = np.diag(m).copy()
    if m.shape != (n,) or not np.all(m > 0):
        raise NonPositiveMass("mass entries must be positive")

    d = 1.0 / np.sqrt(m)
    b = d[:, None] * a * d[None, :]
    b = 0.5 * (b + b.T)
    tol = tolerance * max(1.0, float(np.abs(b).max()) if n else 1.0)
    w, v, sweeps = kernels.jacobi_eigh(b, tol, max_sweeps, use_numba=use_numba)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    order = np.argsort(w, kind="stable")
    w = w[order]
    x = d[:, None] * v[:, order]
    resid = 0.0
    if n:
        r = a @ x - (m[:, None] * x) * w[None, :]
        resid = float(np.abs(r).max())
    return SpectrumResult(w, x, tuple(vertices), convention, resid, sweeps)


def _to_float(rows: list[list[Fraction]]) -> np.ndarray:
    return np.array([[float(q) for q in row] for row in rows], dtype=np.float64)


def _laplacian(order, weight, masses) -> list[list[Fraction]]:
    """diag(m) - W with self-loops cancelled, from an exact weight function."""
    n = len(order)
    L = [[Fraction(0)] * n for _ in range(n)]
    for i, x in enumerate(order):
        L[i][i] = masses[x] - weight(x, x)
        for j, y in enumerate(order):
            if i != j:
                L[i][j] = -weight(x, y)
    return L


def plain_spectrum(graph: WeightedGraph, tolerance: float = DEFAULT_TOL, **kw) -> SpectrumResult:
    order = graph.vertices
    L = _laplacian(order, graph.weight, graph.degrees)
    mass = [float(graph.degrees[x]) for x in order]
    return symmetric_eigensolve(_to_float(L), mass, tolerance, vertices=order, convention=PLAIN, **kw)


def neumann_spectrum_via_modified(
    mg: ModifiedGraph, tolerance: float = DEFAULT_TOL, **kw
) -> SpectrumResult:
    """Spectrum of the modified graph's Laplacian, i.e. the Neumann spectrum."""
    as_plain_graph(mg)
    order = mg.vertices
    L = _laplacian(order, mg.weight, mg.degrees)
    mass = [float(mg.degrees[x]) for x in order]
    return symmetric_eigensolve(
        _to_float(L), mass, tolerance, vertices=order, convention=NEUMANN_MODIFIED, **kw
    )


def neumann_matrix(domain: Domain) -> list[list[Fraction]]:
    """Exact operator of the Neumann problem after eliminating boundary values.

    Row x is ``sum_y mu(x,y) (f(x) - f(y))`` over the neighbours of x, with
    each boundary value replaced by its zero-flux weighted average over Omega.
    """
    graph = domain.graph
    omega = domain.omega_set
    idx = {x: i for i, x in enumerate(domain.omega)}
    n = len(idx)
    A = [[Fraction(0)] * n for _ in range(n)]
    for x in domain.omega:
        i = idx[x]
        for y, w in graph.adjacency[x].items():
            if y == x:
                continue
            A[i][i] += w
            if y in omega:
                A[i][idx[y]] -= w
            else:
                mz = domain.boundary_measure[y]
                for u, wu in graph.adjacency[y].items():
                    if u in omega:
                        A[i][idx[u]] -= w * wu / mz
    return A


def neumann_spectrum_direct(domain: Domain, tolerance: float = DEFAULT_TOL, **kw) -> SpectrumResult:
    A = neumann_matrix(domain)
    mass = [float(domain.graph.degrees[x]) for x in domain.omega]
    return symmetric_eigensolve(
        _to_float(A), mass, tolerance, vertices=domain.omega, convention=NEUMANN_DIRECT, **kw
    )


def dirichlet_spectrum(domain: Domain, tolerance: float = DEFAULT_TOL, **kw) -> SpectrumResult:
    """Energy over E_Omega restricted to functions vanishing on the boundary."""
    graph = domain.graph
    L = _laplacian(domain.omega, graph.weight, graph.degrees)
    mass = [float(graph.degrees[x]) for x in domain.omega]
    return symmetric_eigensolve(
        _to_float(L), mass, tolerance, vertices=domain.omega, convention=DIRICHLET, **kw
    )


def extend_to_boundary(domain: Domain, f) -> np.ndarray:
    """Extend f from Omega to the closure by the zero-flux averaging rule."""
    values = dict(zip(domain.omega, (float(v) for v in as_vector(f, domain.omega))))
    adj = domain.graph.adjacency
    for z in domain.boundary:
        mz = float(domain.boundary_measure[z])
        values[z] = sum(float(w) * values[y] for y, w in adj[z].items() if y in domain.omega_set) / mz
    return np.array([values[v] for v in domain.closure])


def boundary_flux(domain: Domain, f) -> dict[str, float]:
    """``sum_y mu(y,z) (f(y) - f(z))`` at each boundary vertex z."""
    values = dict(zip(domain.closure, (float(v) for v in as_vector(f, domain.closure))))
    adj = domain.graph.adjacency
    return {
        z: sum(float(w) * (values[y] - values[z]) for y, w in adj[z].items() if y in domain.omega_set)
        for z in domain.boundary
    }


def dirichlet_energy(domain: Domain, f) -> float:
    """Sum over E_Omega of mu(x,y) (f(x) - f(y))^2, each edge once."""
    values = dict(zip(domain.closure, as_vector(f, domain.closure)))
    total = 0.0
    for x, y, w in domain.edge_set:
        d = float(values[x]) - float(values[y])
        total += float(w) * d * d
    return total


def rayleigh_lambda1(domain: Domain, f) -> float:
    """Energy of f over its mass-weighted variance on Omega."""
    vec = as_vector(f, domain.closure)
    values = dict(zip(domain.closure, (float(v) for v in vec)))
    inner = [values[x] for x in domain.omega]
    if max(inner) == min(inner):
        raise ConstantFunction("f is constant on Omega")
    m = np.array([float(domain.graph.degrees[x]) for x in domain.omega])
    fx = np.array(inner)
    c = float(m @ fx / m.sum())
    den = float(m @ (fx - c) ** 2)
    return dirichlet_energy(domain, vec) / den
