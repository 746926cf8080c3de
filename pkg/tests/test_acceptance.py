"""Acceptance criteria 1-10, one test each.

Each test records a ``PASS``/``FAIL`` line; the lines are printed in the
terminal summary of every pytest run and by ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction as F

import pytest

from ncheeger import cheeger as ch
from ncheeger import verify as vf
from ncheeger.graph import build_domain, build_graph
from ncheeger.reflection import build_modified_graph, simulate_reflected_walk, transition_probabilities
from ncheeger.spectra import neumann_spectrum_direct

SUITE_SEED = 20240917
SUITE_COUNT = 500
WALK_SEED = 8675309
WALK_STEPS = 10**6
TOL = 1e-9

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}: {detail}"
    assert ok, RESULTS[n]


def path_domain(n, omega):
    names = [f"v{i}" for i in range(1, n + 1)]
    g = build_graph([(a, b, 1) for a, b in zip(names, names[1:])])
    return build_domain(g, omega)


def triangle_domain(a):
    g = build_graph([("v1", "v3", 1), ("v1", "v2", a), ("v2", "v3", a)])
    return build_domain(g, ["v1", "v3"])


@pytest.fixture(scope="module")
def suite():
    t0 = time.perf_counter()
    report = vf.verify_random_suite(SUITE_COUNT, (4, 8), seed=SUITE_SEED, tolerance=TOL, samples=100)
    return report, time.perf_counter() - t0


def summary(report, names):
    """(all passed, text) for the named checks; missing names count as failures."""
    parts, ok = [], True
    for name in names:
        s = report.summaries.get(name)
        if s is None:
            ok = False
            parts.append(f"{name} missing")
            continue
        ok &= s.failed == 0 and s.passed == report.instances
        worst = s.worst_slack
        shown = str(worst) if isinstance(worst, F) else f"{worst + 0.0:.3g}"
        parts.append(f"{name} {s.passed}/{report.instances} (worst slack {shown})")
    return ok, "; ".join(parts)


def test_criterion_01_path_ends_constants():
    t0 = time.perf_counter()
    d = path_domain(3, ["v1", "v3"])
    hn = ch.h_neumann(d).value
    ht = ch.h_tilde(build_modified_graph(d)).value
    dt = time.perf_counter() - t0
    ok = hn == 1 and ht == F(1, 2) and dt < 1.0
    record(1, ok, f"path with Omega at both ends: hN = {hn}, hTilde = {ht} in {dt:.3f} s (want 1, 1/2, < 1 s)")


def test_criterion_02_triangle_at_ten():
    d = triangle_domain(10)
    hn = ch.h_neumann(d).value
    ht = ch.h_tilde(build_modified_graph(d)).value
    formula = (1 + F(10) / 2) / (1 + F(10))
    lam = neumann_spectrum_direct(d).lambda1
    r = vf.verify_instance(d, TOL)
    bounds_ok = [r.check(n).passed for n in ("neumann-lower", "neumann-upper", "modified-spectral-lower",
                                            "modified-spectral-upper")]
    ok = hn == 1 and ht == formula == F(6, 11) and abs(lam - 12 / 11) <= TOL and all(bounds_ok)
    record(2, ok, f"triangle a=10: hN = {hn}, hTilde = {ht}, lambda1N = {lam:.15f} "
                  f"(|err| {abs(lam - 12 / 11):.1e}), spectral bounds hold: {all(bounds_ok)}")


def test_criterion_03_bound_comparison():
    r = vf.verify_instance(path_domain(3, ["v1", "v3"]), TOL)
    main = r.bounds["neumann_lower"]
    trivial = r.bounds["modified_lower"]
    e_main = abs(main - (2 - math.sqrt(3)))
    e_triv = abs(trivial - (1 - math.sqrt(3) / 2))
    ok = main > trivial and e_main <= 1e-12 and e_triv <= 1e-12
    record(3, ok, f"2 - sqrt(4 - hN^2) = {main:.15f} > 1 - sqrt(1 - hTilde^2) = {trivial:.15f} "
                  f"(closed-form errors {e_main:.1e}, {e_triv:.1e})")


def test_criterion_04_constant_chain(suite):
    report, dt = suite
    ok, text = summary(report, ["modified-lower", "modified-upper"])
    ok &= report.instances == SUITE_COUNT and report.passed and dt < 60
    record(4, ok, f"{report.instances} instances, seed {SUITE_SEED}, {report.failure_count} failed checks "
                  f"in {dt:.1f} s; {text}")


def test_criterion_05_spectral_bounds(suite):
    report, _ = suite
    ok, text = summary(report, ["neumann-lower", "neumann-upper",
                                "modified-spectral-lower", "modified-spectral-upper"])
    record(5, ok, f"tolerance {TOL:g}; {text}")


def test_criterion_06_two_assemblies(suite):
    report, _ = suite
    ok, text = summary(report, ["neumann-routes-agree", "degree-preservation"])
    record(6, ok, text)


def test_criterion_07_sobolev_and_coarea(suite):
    report, _ = suite
    ok, text = summary(report, ["sobolev-indicator-minimum", "sobolev-lower", "coarea-identity"])
    ok &= report.config.samples >= 100
    record(7, ok, f"{report.config.samples} random functions per instance; {text}")


def test_criterion_08_equality_cases(suite):
    report, _ = suite
    ok, text = summary(report, ["lower-equality-characterization", "upper-equality-characterization",
                                "lower-equality-inclusion", "upper-equality-inclusion"])
    record(8, ok, text)


def test_criterion_09_monte_carlo():
    d = path_domain(3, ["v1", "v3"])
    t0 = time.perf_counter()
    counts = simulate_reflected_walk(d, "v1", WALK_STEPS, WALK_SEED)
    dt = time.perf_counter() - t0
    exact = transition_probabilities(build_modified_graph(d))
    rows = {x: sum(c for (u, _), c in counts.items() if u == x) for x in d.omega}
    worst = max(abs(counts.get(k, 0) / rows[k[0]] - float(p)) for k, p in exact.items())
    ok = sum(counts.values()) == WALK_STEPS and worst <= 0.01 and dt < 10
    record(9, ok, f"{WALK_STEPS} steps, seed {WALK_SEED}: max |empirical - exact| = {worst:.2e} "
                  f"in {dt:.2f} s (want <= 0.01, < 10 s)")


def test_criterion_10_p3_desk_oracle():
    d = path_domain(3, ["v1", "v2"])
    lam = neumann_spectrum_direct(d).lambda1
    ctx = ch.equality_context(d)
    lower = ch.check_lower_equality(d, ctx=ctx)
    ok = abs(lam - 1.5) <= TOL and ctx.hn.value == ctx.ht.value == 1 and lower.predicate
    record(10, ok, f"P3 lambda1N = {lam:.15f}, hN = {ctx.hn.value}, hTilde = {ctx.ht.value}, "
                   f"lower-equality predicate {lower.predicate}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
