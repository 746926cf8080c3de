"""Machine-checkable verification of the Cheeger and spectral estimates.

``verify_instance`` evaluates every inequality on one domain and records a
signed slack per check. ``verify_random_suite`` runs those checks plus the
structural property suite over seeded random instances.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import multiprocessing

import numpy as np

from . import cheeger as ch
from . import kernels
from . import spectra as sp
from .errors import DisconnectedGraph, InputError, ZeroDenominator
from .graph import Domain, build_domain, build_graph, cut_weight, measure
from .reflection import as_plain_graph, build_modified_graph

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    claim: str
    passed: bool
    slack: Fraction | float
    exact: bool = False


def exact_check(name: str, claim: str, slack: Fraction) -> Check:
    return Check(name, claim, slack >= 0, slack, exact=True)


def float_check(name: str, claim: str, slack: float, tol: float) -> Check:
    return Check(name, claim, bool(slack >= -tol), float(slack), exact=False)


def describe_instance(domain: Domain) -> dict:
    return {
        "edges": [[u, v, str(w)] for u, v, w in domain.graph.edges()],
        "omega": list(domain.omega),
    }


def instance_from_description(desc: dict) -> Domain:
    graph = build_graph((u, v, Fraction(w)) for u, v, w in desc["edges"])
    return build_domain(graph, desc["omega"])


@dataclass(frozen=True)
class VerificationReport:
    instance: dict
    quantities: dict
    checks: tuple[Check, ...]
    info: dict
    tolerance: float
    bounds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _f(x: float) -> str:
    return f"{x:.17g}"


def verify_instance(
    domain: Domain,
    tolerance: float = DEFAULT_TOL,
    limit: int = ch.ENUMERATION_LIMIT,
    eig_tol: float = sp.DEFAULT_TOL,
) -> VerificationReport:
    ctx = ch.equality_context(domain, limit)
    return _verify(domain, ctx, tolerance, limit, eig_tol)[0]


def _verify(domain, ctx, tolerance, limit, eig_tol):
    mg = ctx.modified
    hn, ht = ctx.hn.value, ctx.ht.value
    plain = as_plain_graph(mg)
    hg = ch.h_classical(plain, limit).value

    direct = sp.neumann_spectrum_direct(domain, eig_tol)
    lam1 = direct.lambda1
    plain_spec = sp.plain_spectrum(plain, eig_tol)
    lam1_plain = plain_spec.lambda1
    dirichlet = sp.dirichlet_spectrum(domain, eig_tol)
    d1 = float(dirichlet.eigenvalues[0])
    d2 = float(dirichlet.eigenvalues[1])

    fhn, fht, fhg = float(hn), float(ht), float(hg)
    main_lower = 2.0 - math.sqrt(4.0 - fhn * fhn)
    trivial_lower = 1.0 - math.sqrt(1.0 - fht * fht)
    combined = max(main_lower, trivial_lower)
    weak = max(fhn * fhn / 4.0, fht * fht / 2.0)
    classical_lower = 1.0 - math.sqrt(1.0 - fhg * fhg)

    checks = [
        exact_check("modified-lower", f"hTilde = {ht} <= hN = {hn}", hn - ht),
        exact_check("modified-upper", f"hN = {hn} <= 2*hTilde = {2 * ht}", 2 * ht - hn),
        float_check(
            "neumann-lower",
            f"2 - sqrt(4 - hN^2) = {_f(main_lower)} <= lambda1N = {_f(lam1)}",
            lam1 - main_lower,
            tolerance,
        ),
        float_check(
            "neumann-upper",
            f"lambda1N = {_f(lam1)} <= 2*hN = {_f(2 * fhn)}",
            2 * fhn - lam1,
            tolerance,
        ),
        float_check(
            "modified-spectral-lower",
            f"1 - sqrt(1 - hTilde^2) = {_f(trivial_lower)} <= lambda1N = {_f(lam1)}",
            lam1 - trivial_lower,
            tolerance,
        ),
        float_check(
            "modified-spectral-upper",
            f"lambda1N = {_f(lam1)} <= 2*hTilde = {_f(2 * fht)}",
            2 * fht - lam1,
            tolerance,
        ),
        float_check(
            "combined-lower",
            f"max(2 - sqrt(4 - hN^2), 1 - sqrt(1 - hTilde^2)) = {_f(combined)} <= lambda1N = {_f(lam1)}",
            lam1 - combined,
            tolerance,
        ),
        float_check(
            "quadratic-lower",
            f"max(hN^2/4, hTilde^2/2) = {_f(weak)} <= lambda1N = {_f(lam1)}",
            lam1 - weak,
            tolerance,
        ),
        exact_check(
            "classical-matches-modified",
            f"hG(modified graph) = {hg} == hTilde = {ht}",
            -abs(hg - ht),
        ),
        float_check(
            "classical-chain",
            f"hG^2/2 = {_f(fhg * fhg / 2)} <= 1 - sqrt(1 - hG^2) = {_f(classical_lower)}",
            classical_lower - fhg * fhg / 2,
            tolerance,
        ),
        float_check(
            "classical-lower",
            f"1 - sqrt(1 - hG^2) = {_f(classical_lower)} <= lambda1(modified) = {_f(lam1_plain)}",
            lam1_plain - classical_lower,
            tolerance,
        ),
        float_check(
            "classical-upper",
            f"lambda1(modified) = {_f(lam1_plain)} <= 2*hG = {_f(2 * fhg)}",
            2 * fhg - lam1_plain,
            tolerance,
        ),
    ]
    quantities = {
        "hN": hn,
        "hTilde": ht,
        "hG_modified": hg,
        "lambda1N": lam1,
        "lambda1D": d1,
        "lambda2D": d2,
    }
    info = {
        "dirichlet_gap": d2 - d1,
        "lambda1N": lam1,
        "note": "Dirichlet gap reported without asserting an inequality",
    }
    bounds = {
        "neumann_lower": main_lower,
        "neumann_upper": 2 * fhn,
        "modified_lower": trivial_lower,
        "modified_upper": 2 * fht,
        "combined_lower": combined,
        "quadratic_lower": weak,
        "classical_lower": classical_lower,
    }
    report = VerificationReport(
        describe_instance(domain), quantities, tuple(checks), info, tolerance, bounds
    )
    return report, direct, dirichlet, plain_spec


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    count: int = 500
    size_bounds: tuple[int, int] = (4, 8)
    numerator_bounds: tuple[int, int] = (1, 12)
    denominator_bounds: tuple[int, int] = (1, 4)
    edge_probability: float = 0.5
    seed: int = 0
    tolerance: float = DEFAULT_TOL
    samples: int = 100


def random_rational(rng: np.random.Generator, num: tuple[int, int], den: tuple[int, int]) -> Fraction:
    return Fraction(int(rng.integers(num[0], num[1] + 1)), int(rng.integers(den[0], den[1] + 1)))


def random_instance(rng: np.random.Generator, cfg: SuiteConfig = SuiteConfig()) -> Domain:
    """Connected random graph with a random domain whose modified graph is connected."""
    lo, hi = cfg.size_bounds
    while True:
        n = int(rng.integers(lo, hi + 1))
        names = [f"v{i}" for i in range(1, n + 1)]
        edges = [
            (u, v, random_rational(rng, cfg.numerator_bounds, cfg.denominator_bounds))
            for u, v in combinations(names, 2)
            if rng.random() < cfg.edge_probability
        ]
        try:
            graph = build_graph(edges)
        except (DisconnectedGraph, InputError):
            continue
        if len(graph) != n:
            continue
        for _ in range(64):
            omega = [v for v in names if rng.random() < 0.5]
            if len(omega) < 2:
                continue
            try:
                domain = build_domain(graph, omega)
                as_plain_graph(build_modified_graph(domain))
            except InputError:
                continue
            return domain


def random_function(rng: np.random.Generator, domain: Domain, cfg: SuiteConfig) -> dict[str, Fraction]:
    """Random rational function on the closure that is non-constant on Omega."""
    while True:
        f = {
            v: Fraction(int(rng.integers(-12, 13)), int(rng.integers(1, 5)))
            for v in domain.closure
        }
        if len({f[x] for x in domain.omega}) > 1:
            return f


# ---------------------------------------------------------------------------
# property suite
# ---------------------------------------------------------------------------


def _scaled_domain(domain: Domain, lam: Fraction) -> Domain:
    graph = build_graph((u, v, w * lam) for u, v, w in domain.graph.edges())
    return build_domain(graph, domain.omega)


def property_checks(
    domain: Domain,
    rng: np.random.Generator,
    cfg: SuiteConfig = SuiteConfig(),
    limit: int = ch.ENUMERATION_LIMIT,
) -> tuple[VerificationReport, list[Check]]:
    """Bound checks plus every structural property on one instance."""
    tol = cfg.tolerance
    ctx = ch.equality_context(domain, limit)
    report, direct, dirichlet, plain_spec = _verify(domain, ctx, tol, limit, sp.DEFAULT_TOL)
    mg = ctx.modified
    hn = ctx.hn.value
    graph = domain.graph
    out: list[Check] = []

    # graph core
    recomputed = sorted(
        {z for x in domain.omega for z, w in graph.adjacency[x].items() if z not in domain.omega_set and w > 0}
    )
    out.append(exact_check("boundary-recomputed", "vertex boundary matches recomputation",
                           Fraction(0 if recomputed == sorted(domain.boundary) else -1)))
    total = domain.total_measure()
    worst_sym = Fraction(0)
    worst_add = Fraction(0)
    closure = list(domain.closure)
    for _ in range(8):
        s = {v for v in closure if rng.random() < 0.5}
        worst_add = min(worst_add, -abs(measure(domain, s) + measure(domain, set(closure) - s) - total))
        if 0 < len(s) < len(closure):
            worst_sym = min(worst_sym, -abs(cut_weight(domain, s) - cut_weight(domain, set(closure) - s)))
    out.append(exact_check("cut-symmetry", "cut(S) == cut(S complement)", worst_sym))
    out.append(exact_check("measure-additivity", "m(S) + m(S complement) == m(Omega)", worst_add))

    # reflection
    deg_gap = -sum((abs(mg.degrees[x] - graph.degrees[x]) for x in domain.omega), Fraction(0))
    out.append(exact_check("degree-preservation", "modified degrees equal original degrees", deg_gap))
    sym_gap = -sum((abs(w - mg.weight(y, x)) for (x, y), w in mg.weights.items()), Fraction(0))
    out.append(exact_check("modified-symmetry", "modified weights are symmetric", sym_gap))

    # spectra
    modified = sp.neumann_spectrum_via_modified(mg)
    diff = float(np.abs(direct.eigenvalues - modified.eigenvalues).max())
    out.append(float_check("neumann-routes-agree",
                           f"max |direct - modified| = {_f(diff)}", -diff, tol))
    lam0 = float(direct.eigenvalues[0])
    v0 = direct.eigenvectors[:, 0]
    flat = float(np.ptp(v0) / max(np.abs(v0).max(), 1e-300))
    out.append(float_check("neumann-ground-state",
                           f"lambda0 = {_f(lam0)}, constant eigenvector spread {_f(flat)}",
                           -max(abs(lam0), flat), tol))
    lo, hi = float(direct.eigenvalues.min()), float(direct.eigenvalues.max())
    out.append(float_check("neumann-range", f"spectrum within [0, 2]: [{_f(lo)}, {_f(hi)}]",
                           min(lo, 2.0 - hi), tol))
    resid = max(direct.residual, modified.residual, dirichlet.residual, plain_spec.residual)
    out.append(float_check("eigensolver-residual", f"max residual {_f(resid)}", -resid, tol))
    flux = 0.0
    for k in range(len(direct)):
        ext = sp.extend_to_boundary(domain, direct.eigenvectors[:, k])
        flux = max(flux, max(abs(v) for v in sp.boundary_flux(domain, ext).values()))
    out.append(float_check("boundary-condition", f"max boundary flux {_f(flux)}", -flux, tol))

    # variational characterizations and the coarea formula
    worst_rq = math.inf
    worst_sob = None
    coarea_gap = Fraction(0)
    funcs = [random_function(rng, domain, cfg) for _ in range(cfg.samples)]
    for f in funcs:
        worst_rq = min(worst_rq, sp.rayleigh_lambda1(domain, f) - direct.lambda1)
        q = ch.sobolev_quotient(domain, f)
        worst_sob = q - hn if worst_sob is None else min(worst_sob, q - hn)
        lhs, rhs = ch.coarea_identity_check(domain, f)
        coarea_gap = min(coarea_gap, -abs(lhs - rhs))
    out.append(float_check("rayleigh-upper", "lambda1N <= Rayleigh quotient of random f", worst_rq, tol))
    out.append(exact_check("sobolev-lower", "Sobolev quotient of random f >= hN", worst_sob))
    out.append(exact_check("coarea-identity", "total variation == integral of level-set cuts", coarea_gap))

    best_indicator = None
    for k in range(1, len(closure)):
        for combo in combinations(closure, k):
            s = set(combo)
            f = {v: (1 if v in s else -1) for v in closure}
            try:
                q = ch.sobolev_quotient(domain, f)
            except ZeroDenominator:
                continue
            if best_indicator is None or q < best_indicator:
                best_indicator = q
    out.append(exact_check("sobolev-indicator-minimum",
                           f"min over indicators = {best_indicator} == hN = {hn}",
                           -abs(best_indicator - hn)))

    # equality characterizations and the minimizer inclusions they imply
    lower = ch.check_lower_equality(domain, limit, ctx)
    upper = ch.check_upper_equality(domain, limit, ctx)
    out.append(exact_check("lower-equality-characterization",
                           f"(hTilde == hN) = {lower.holds}, predicate = {lower.predicate}",
                           Fraction(0 if lower.consistent else -1)))
    out.append(exact_check("upper-equality-characterization",
                           f"(hN == 2 hTilde) = {upper.holds}, predicate = {upper.predicate}",
                           Fraction(0 if upper.consistent else -1)))
    induced = ctx.induced
    tilde_min = ctx.ht.minimizer_set
    ok = not lower.holds or induced <= tilde_min
    out.append(exact_check("lower-equality-inclusion", "hTilde == hN implies induced minimizers are modified minimizers",
                           Fraction(0 if ok else -1)))
    ok = not upper.holds or tilde_min <= induced
    out.append(exact_check("upper-equality-inclusion", "hN == 2 hTilde implies modified minimizers are induced",
                           Fraction(0 if ok else -1)))

    # partition lifting and sweeps
    lift_slack = None
    lift_min = Fraction(0)
    omega = list(domain.omega)
    for k in range(1, len(omega)):
        for combo in combinations(omega, k):
            if omega[0] in combo:
                continue
            p = ch.omega_partition(domain, combo)
            z2 = 2 * ch.zeta(mg, p)
            for lifted in ch.lift_partition_all(domain, p):
                e = ch.eta(domain, lifted)
                lift_slack = z2 - e if lift_slack is None else min(lift_slack, z2 - e)
                lift_min = min(lift_min, e - hn)
    out.append(exact_check("lift-bound", "eta(lift(P)) <= 2 zeta(P)", lift_slack))
    sweep_min = Fraction(0)
    ext = sp.extend_to_boundary(domain, direct.eigenvectors[:, 1])
    if np.ptp(ext[[domain.closure.index(x) for x in domain.omega]]) > 0:
        sweep_min = min(sweep_min, ch.sweep_cut(domain, ext)[1] - hn)
    for f in funcs[:10]:
        sweep_min = min(sweep_min, ch.sweep_cut(domain, f)[1] - hn)
    out.append(exact_check("lift-and-sweep-minimality", "eta of lifted and swept partitions >= hN",
                           min(lift_min, sweep_min)))

    # scale invariance
    lam = random_rational(rng, cfg.numerator_bounds, cfg.denominator_bounds)
    scaled = _scaled_domain(domain, lam)
    sctx = ch.equality_context(scaled, limit)
    shg = ch.h_classical(scaled.graph, limit).value
    hg = ch.h_classical(graph, limit).value
    gap = -(abs(sctx.hn.value - hn) + abs(sctx.ht.value - ctx.ht.value) + abs(shg - hg))
    out.append(exact_check("scale-invariance", f"constants unchanged under weights * {lam}", gap))
    return report, out


@dataclass
class CheckSummary:
    name: str
    exact: bool
    passed: int = 0
    failed: int = 0
    worst_slack: Fraction | float | None = None

    def add(self, c: Check) -> None:
        if c.passed:
            self.passed += 1
        else:
            self.failed += 1
        if self.worst_slack is None or c.slack < self.worst_slack:
            self.worst_slack = c.slack


@dataclass
class SuiteReport:
    config: SuiteConfig
    instances: int = 0
    summaries: dict[str, CheckSummary] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def failure_count(self) -> int:
        return sum(s.failed for s in self.summaries.values())

    def add(self, index: int, report: VerificationReport, extra: list[Check]) -> None:
        self.instances += 1
        failed = []
        for c in list(report.checks) + extra:
            s = self.summaries.get(c.name)
            if s is None:
                s = self.summaries[c.name] = CheckSummary(c.name, c.exact)
            s.add(c)
            if not c.passed:
                failed.append(c)
        if failed:
            self.failures.append({
                "index": index,
                "instance": report.instance,
                "checks": [(c.name, c.claim, c.slack) for c in failed],
            })


def _run_one(args):
    cfg, index, entropy = args
    rng = np.random.default_rng(np.random.SeedSequence(entropy))
    domain = random_instance(rng, cfg)
    report, extra = property_checks(domain, rng, cfg)
    return index, report, extra


def verify_random_suite(
    count: int = 500,
    size_bounds: tuple[int, int] = (4, 8),
    weight_bounds: tuple[tuple[int, int], tuple[int, int]] = ((1, 12), (1, 4)),
    seed: int = 0,
    *,
    tolerance: float = DEFAULT_TOL,
    samples: int = 100,
    workers: int | None = None,
    progress: Callable[[int], None] | None = None,
) -> SuiteReport:
    """Run the verification and property suite on ``count`` seeded instances.

    Instance i draws from its own child of ``SeedSequence(seed)``, so the
    report is identical for any worker count.
    """
    if count < 1:
        raise InputError("count must be at least 1")
    cfg = SuiteConfig(
        count=count,
        size_bounds=tuple(size_bounds),
        numerator_bounds=tuple(weight_bounds[0]),
        denominator_bounds=tuple(weight_bounds[1]),
        seed=seed,
        tolerance=tolerance,
        samples=samples,
    )
    children = np.random.SeedSequence(seed).spawn(count)
    jobs = [(cfg, i, _child_seed(c)) for i, c in enumerate(children)]
    workers = kernels.worker_count() if workers is None else max(1, workers)
    suite = SuiteReport(cfg)
    if workers > 1 and count >= 4 * workers:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = pool.map(_run_one, jobs, chunksize=max(1, count // (8 * workers)))
            for index, report, extra in results:
                suite.add(index, report, extra)
                if progress:
                    progress(index)
    else:
        for job in jobs:
            index, report, extra = _run_one(job)
            suite.add(index, report, extra)
            if progress:
                progress(index)
    return suite


def _child_seed(child: np.random.SeedSequence) -> list[int]:
    return [int(x) for x in child.generate_state(4, dtype=np.uint32)]
