"""Exact Neumann Cheeger constants, modified graphs and Laplacian spectra of graph domains."""

from __future__ import annotations

from .cheeger import (
    CheegerResult,
    EqualityReport,
    check_lower_equality,
    check_upper_equality,
    closure_partition,
    coarea_identity_check,
    eta,
    h_classical,
    h_neumann,
    h_tilde,
    induced_partition,
    lift_partition,
    lift_partition_all,
    omega_partition,
    sobolev_quotient,
    sweep_cut,
    zeta,
)
from .errors import InputError, NCheegerError
from .fileio import dumps, parse_graph_file, parse_omega_file, render_graph
from .graph import (
    Domain,
    Partition,
    WeightedGraph,
    build_domain,
    build_graph,
    cut_weight,
    measure,
    parse_rational,
)
from .reflection import (
    ModifiedGraph,
    build_modified_graph,
    simulate_reflected_walk,
    transition_probabilities,
)
from .spectra import (
    SpectrumResult,
    dirichlet_spectrum,
    neumann_spectrum_direct,
    neumann_spectrum_via_modified,
    plain_spectrum,
    rayleigh_lambda1,
    symmetric_eigensolve,
)
from .verify import VerificationReport, verify_instance, verify_random_suite

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
