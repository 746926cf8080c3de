"""Command-line interface: ``ncheeger <command> --graph F --omega F ...``.

Exit status is 0 when everything succeeded and every check passed, 1 when
a check failed, 2 on bad input or usage.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import TextIO

from . import cheeger as ch
from . import spectra as sp
from . import verify as vf
from .errors import InputError, NCheegerError
from .fileio import dumps, read_graph, read_omega, render_graph
from .graph import Domain, Partition, build_domain
from .reflection import build_modified_graph, simulate_reflected_walk, transition_probabilities

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

WHAT_CHOICES = (ch.H_NEUMANN, ch.H_TILDE, ch.H_CLASSICAL)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _partition_json(p: Partition) -> list[list[str]]:
    a, b = p.blocks()
    return [list(a), list(b)]


def _partition_text(p: Partition) -> str:
    a, b = p.blocks()
    return "{" + ",".join(a) + "}|{" + ",".join(b) + "}"


def _domain(args) -> Domain:
    return build_domain(read_graph(args.graph), read_omega(args.omega))


def _add_domain_args(p: argparse.ArgumentParser, omega_required: bool = True) -> None:
    p.add_argument("--graph", required=True, metavar="FILE", help="edge list u<TAB>v<TAB>w")
    p.add_argument("--omega", required=omega_required, metavar="FILE", help="one vertex per line")
    p.add_argument("--limit", type=int, default=ch.ENUMERATION_LIMIT,
                   help="largest vertex count for exhaustive search")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_cheeger(args, out: TextIO) -> int:
    graph = read_graph(args.graph)
    default = "hN,hTilde" if args.omega else "hG"
    wanted = [w.strip() for w in (args.what or default).split(",") if w.strip()]
    bad = [w for w in wanted if w not in WHAT_CHOICES]
    if bad or not wanted:
        raise InputError(f"--what takes a comma list of {', '.join(WHAT_CHOICES)}")
    if not args.omega and any(w != ch.H_CLASSICAL for w in wanted):
        raise InputError("hN and hTilde need --omega")

    results: dict[str, ch.CheegerResult] = {}
    domain = build_domain(graph, read_omega(args.omega)) if args.omega else None
    for w in wanted:
        if w == ch.H_NEUMANN:
            results[w] = ch.h_neumann(domain, args.limit)
        elif w == ch.H_TILDE:
            results[w] = ch.h_tilde(build_modified_graph(domain), args.limit)
        else:
            results[w] = ch.h_classical(graph, args.limit)

    if args.format == "table":
        for name, r in results.items():
            parts = "; ".join(_partition_text(p) for p in r.minimizers)
            out.write(f"{name}\t{r.value}\t{parts}\n")
    else:
        doc: dict = {name: r.value for name, r in results.items()}
        doc["minimizers"] = {
            name: [_partition_json(p) for p in r.minimizers] for name, r in results.items()
        }
        out.write(dumps(doc))
    return EXIT_OK


def cmd_spectrum(args, out: TextIO) -> int:
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    domain = _domain(args)
    doc: dict = {}
    if args.which in ("neumann", "both"):
        direct = sp.neumann_spectrum_direct(domain, args.tol)
        modified = sp.neumann_spectrum_via_modified(build_modified_graph(domain), args.tol)
        diff = float(abs(direct.eigenvalues - modified.eigenvalues).max())
        doc["neumann"] = {
            "vertices": list(domain.omega),
            "direct": direct.eigenvalues,
            "modified": modified.eigenvalues,
            "max_difference": diff,
            "lambda1": direct.lambda1,
            "residual": max(direct.residual, modified.residual),
        }
    if args.which in ("dirichlet", "both"):
        dr = sp.dirichlet_spectrum(domain, args.tol)
        entry = {"vertices": list(domain.omega), "eigenvalues": dr.eigenvalues}
        entry["gap"] = dr.lambda1 - float(dr.eigenvalues[0])
        entry["residual"] = dr.residual
        doc["dirichlet"] = entry
    out.write(dumps(doc))
    return EXIT_OK


def cmd_modified(args, out: TextIO) -> int:
    out.write(render_graph(build_modified_graph(_domain(args)).edges()))
    return EXIT_OK


def cmd_sweep(args, out: TextIO) -> int:
    domain = _domain(args)
    spec = sp.neumann_spectrum_direct(domain)
    f = sp.extend_to_boundary(domain, spec.eigenvectors[:, 1])
    part, value = ch.sweep_cut(domain, f)
    doc = {
        "partition": _partition_json(part),
        "value": value,
        "lambda1N": spec.lambda1,
        "eigenfunction": dict(zip(domain.closure, f.tolist())),
    }
    out.write(dumps(doc))
    return EXIT_OK


def _equality_json(r: ch.EqualityReport) -> dict:
    return {
        "holds": r.holds,
        "predicate": r.predicate,
        "consistent": r.consistent,
        "intersection": [_partition_json(p) for p in r.intersection],
        "violations": [
            {"partition": _partition_json(p), "vertex": z, "reason": why}
            for p, z, why in r.violations
        ],
    }


def cmd_equality(args, out: TextIO) -> int:
    domain = _domain(args)
    ctx = ch.equality_context(domain, args.limit)
    lower = ch.check_lower_equality(domain, ctx=ctx)
    upper = ch.check_upper_equality(domain, ctx=ctx)
    doc = {
        "hN": ctx.hn.value,
        "hTilde": ctx.ht.value,
        "lower": _equality_json(lower),
        "upper": _equality_json(upper),
    }
    out.write(dumps(doc))
    return EXIT_OK if lower.consistent and upper.consistent else EXIT_FAILED


def cmd_walk(args, out: TextIO) -> int:
    domain = _domain(args)
    start = args.start or domain.omega[0]
    counts = simulate_reflected_walk(domain, start, args.steps, args.seed)
    exact = transition_probabilities(build_modified_graph(domain))
    row_total: dict[str, int] = {}
    for (x, _y), c in counts.items():
        row_total[x] = row_total.get(x, 0) + c
    rows = []
    worst = 0.0
    for x in domain.omega:
        for y in domain.omega:
            p = exact.get((x, y), Fraction(0))
            c = counts.get((x, y), 0)
            if p == 0 and c == 0:
                continue
            emp = c / row_total[x] if row_total.get(x) else 0.0
            if row_total.get(x):
                worst = max(worst, abs(emp - float(p)))
            rows.append({"from": x, "to": y, "count": c, "empirical": emp,
                         "exact": p, "exact_float": float(p)})
    doc = {"steps": args.steps, "seed": args.seed, "start": start,
           "max_deviation": worst, "transitions": rows}
    out.write(dumps(doc))
    return EXIT_OK


def _check_json(c: vf.Check) -> dict:
    return {"name": c.name, "claim": c.claim, "passed": c.passed, "slack": c.slack}


def report_json(r: vf.VerificationReport) -> dict:
    return {
        "instance": r.instance,
        "tolerance": r.tolerance,
        "passed": r.passed,
        "quantities": r.quantities,
        "bounds": r.bounds,
        "info": r.info,
        "checks": [_check_json(c) for c in r.checks],
    }


def suite_json(s: vf.SuiteReport) -> dict:
    cfg = s.config
    return {
        "config": {
            "count": cfg.count,
            "seed": cfg.seed,
            "size_bounds": list(cfg.size_bounds),
            "numerator_bounds": list(cfg.numerator_bounds),
            "denominator_bounds": list(cfg.denominator_bounds),
            "edge_probability": cfg.edge_probability,
            "samples": cfg.samples,
            "tolerance": cfg.tolerance,
        },
        "instances": s.instances,
        "passed": s.passed,
        "failed_checks": s.failure_count,
        "checks": [
            {"name": c.name, "exact": c.exact, "passed": c.passed,
             "failed": c.failed, "worst_slack": c.worst_slack}
            for c in s.summaries.values()
        ],
        "failures": [
            {"index": f["index"], "instance": f["instance"],
             "checks": [{"name": n, "claim": cl, "slack": sl} for n, cl, sl in f["checks"]]}
            for f in s.failures
        ],
    }


def cmd_verify(args, out: TextIO) -> int:
    if not args.tol >= 0:
        raise InputError("--tol must be non-negative")
    if args.random is not None:
        if args.graph or args.omega:
            raise InputError("use either --random or --graph/--omega")
        if args.random < 1:
            raise InputError("--random needs a positive count")
        suite = vf.verify_random_suite(
            args.random, (args.min_size, args.max_size), seed=args.seed,
            tolerance=args.tol, samples=args.samples, workers=args.workers,
        )
        out.write(dumps(suite_json(suite)))
        return EXIT_OK if suite.passed else EXIT_FAILED
    if not (args.graph and args.omega):
        raise InputError("verify needs --graph and --omega, or --random N")
    report = vf.verify_instance(_domain(args), args.tol, args.limit)
    out.write(dumps(report_json(report)))
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncheeger", description="Neumann Cheeger constants and spectra of graph domains.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cheeger", help="exact Cheeger constants with minimizing partitions")
    _add_domain_args(p, omega_required=False)
    p.add_argument("--what", help="comma list of hN, hTilde, hG")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(run=cmd_cheeger)

    p = sub.add_parser("spectrum", help="Neumann and Dirichlet eigenvalues")
    _add_domain_args(p)
    p.add_argument("--which", choices=("neumann", "dirichlet", "both"), default="both")
    p.add_argument("--tol", type=float, default=sp.DEFAULT_TOL)
    p.set_defaults(run=cmd_spectrum)

    p = sub.add_parser("modified", help="edge list of the modified graph")
    _add_domain_args(p)
    p.set_defaults(run=cmd_modified)

    p = sub.add_parser("sweep", help="sweep cut of the first Neumann eigenfunction")
    _add_domain_args(p)
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("equality", help="equality characterizations of hN against hTilde")
    _add_domain_args(p)
    p.set_defaults(run=cmd_equality)

    p = sub.add_parser("walk", help="simulate the reflected random walk")
    _add_domain_args(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start", help="starting vertex in Omega (default: first)")
    p.set_defaults(run=cmd_walk)

    p = sub.add_parser("verify", help="check every bound on one domain or a random suite")
    p.add_argument("--graph", metavar="FILE")
    p.add_argument("--omega", metavar="FILE")
    p.add_argument("--limit", type=int, default=ch.ENUMERATION_LIMIT)
    p.add_argument("--tol", type=float, default=vf.DEFAULT_TOL)
    p.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-size", type=int, default=4)
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--samples", type=int, default=100, help="random functions per instance")
    p.add_argument("--workers", type=int, help="process count (default: NCHEEGER_THREADS or all cores)")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INPUT
    try:
        return args.run(args, out)
    except (NCheegerError, OSError) as exc:
        err.write(f"ncheeger {args.command}: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
