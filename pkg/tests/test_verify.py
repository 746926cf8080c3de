from __future__ import annotations

import math
from fractions import Fraction as F

import numpy as np
import pytest

from ncheeger import verify as vf
from ncheeger.errors import InputError
from ncheeger.reflection import as_plain_graph, build_modified_graph


def test_path_ends_report(path_ends):
    r = vf.verify_instance(path_ends)
    assert r.passed
    assert r.quantities["hN"] == 1 and r.quantities["hTilde"] == F(1, 2)
    assert abs(r.quantities["lambda1N"] - 1) < 1e-9
    assert abs(r.bounds["neumann_lower"] - (2 - math.sqrt(3))) < 1e-12
    assert abs(r.bounds["modified_lower"] - (1 - math.sqrt(3) / 2)) < 1e-12
    assert r.bounds["neumann_lower"] > r.bounds["modified_lower"]
    assert "2 - sqrt(4 - hN^2) = 0.2679" in r.check("neumann-lower").claim


def test_p3_report(p3):
    r = vf.verify_instance(p3)
    assert r.passed
    assert abs(r.quantities["lambda1N"] - 1.5) < 1e-9
    assert abs(r.check("neumann-upper").slack - 0.5) < 1e-9


def test_p4_upper_bound_tight(p4):
    r = vf.verify_instance(p4)
    assert r.passed
    assert abs(r.check("neumann-upper").slack) < 1e-12


def test_exact_checks_use_rationals(tri10):
    r = vf.verify_instance(tri10)
    c = r.check("modified-lower")
    assert c.exact and c.slack == F(5, 11)
    assert r.check("modified-upper").slack == F(1, 11)
    assert r.check("classical-matches-modified").slack == 0


def test_dirichlet_gap_is_informational(path_ends):
    r = vf.verify_instance(path_ends)
    assert r.info["dirichlet_gap"] == pytest.approx(0, abs=1e-12)
    assert not any("dirichlet" in c.name for c in r.checks)


def test_check_lookup(path_ends):
    with pytest.raises(KeyError):
        vf.verify_instance(path_ends).check("missing")


def test_float_check_tolerance():
    assert vf.float_check("x", "", -1e-10, 1e-9).passed
    assert not vf.float_check("x", "", -1e-8, 1e-9).passed


def test_instance_description_round_trip(tri10):
    desc = vf.describe_instance(tri10)
    assert desc["edges"][0] == ["v1", "v2", "10"]
    back = vf.instance_from_description(desc)
    assert back.graph.edges() == tri10.graph.edges() and back.omega == tri10.omega


def test_random_instance_meets_preconditions():
    rng = np.random.default_rng(0)
    cfg = vf.SuiteConfig()
    for _ in range(30):
        d = vf.random_instance(rng, cfg)
        assert 4 <= len(d.graph) <= 8
        assert len(d.omega) >= 2 and d.boundary
        as_plain_graph(build_modified_graph(d))
        for _, _, w in d.graph.edges():
            assert 1 <= w.numerator <= 12 and w.denominator <= 4


def test_random_function_nonconstant(path_ends):
    rng = np.random.default_rng(1)
    for _ in range(20):
        f = vf.random_function(rng, path_ends, vf.SuiteConfig())
        assert f["v1"] != f["v3"]


def test_suite_single_instance():
    s = vf.verify_random_suite(1, seed=5, samples=3)
    assert s.instances == 1 and s.passed


def test_suite_deterministic_and_worker_independent():
    a = vf.verify_random_suite(8, seed=42, samples=4, workers=1)
    b = vf.verify_random_suite(8, seed=42, samples=4, workers=2)
    assert [(c.name, c.passed, c.worst_slack) for c in a.summaries.values()] == [
        (c.name, c.passed, c.worst_slack) for c in b.summaries.values()
    ]


def test_suite_records_failing_instance(path_ends):
    s = vf.SuiteReport(vf.SuiteConfig())
    r = vf.verify_instance(path_ends)
    bad = vf.exact_check("injected", "1 <= 0", F(-1))
    s.add(7, r, [bad])
    assert not s.passed and s.failure_count == 1
    rec = s.failures[0]
    assert rec["index"] == 7 and rec["checks"][0][0] == "injected"
    assert vf.instance_from_description(rec["instance"]).omega == path_ends.omega


def test_suite_rejects_zero_count():
    with pytest.raises(InputError):
        vf.verify_random_suite(0)


def test_property_checks_pass_on_fixtures(path_ends, tri10, p3, p4):
    rng = np.random.default_rng(3)
    cfg = vf.SuiteConfig(samples=20)
    for d in (path_ends, tri10, p3, p4):
        report, extra = vf.property_checks(d, rng, cfg)
        failed = [c.name for c in list(report.checks) + extra if not c.passed]
        assert failed == []
