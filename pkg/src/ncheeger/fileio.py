"""Graph/Omega text formats and deterministic JSON rendering.

Graph files hold one edge per line as ``u<TAB>v<TAB>w``; Omega files hold
one vertex per line. ``#`` starts a comment and blank lines are ignored.
Weights are integers, ``p/q`` fractions or finite decimals, all read exactly.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DuplicateEdge, DuplicateVertex, InputError, NonPositiveWeight, ParseError
from .graph import WeightedGraph, build_graph, parse_rational


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield lineno, line


def parse_graph_file(text: str) -> WeightedGraph:
    edges = []
    seen: dict[frozenset, int] = {}
    for lineno, line in _content_lines(text):
        fields = line.strip().split("\t")
        if len(fields) != 3 or any(not f or any(c.isspace() for c in f) for f in fields):
            raise ParseError("expected 'u<TAB>v<TAB>weight'", lineno)
        u, v, token = fields
        try:
            w = parse_rational(token)
        except InputError:
            raise ParseError(f"bad weight {token!r}", lineno) from None
        if w <= 0:
            raise NonPositiveWeight(f"line {lineno}: edge {{{u},{v}}} has weight {w}")
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdge(f"line {lineno}: edge {{{u},{v}}} already given on line {seen[key]}")
        seen[key] = lineno
        edges.append((u, v, w))
    if not edges:
        raise ParseError("graph file contains no edges")
    return build_graph(edges)


def render_graph(edges: Iterable[tuple[str, str, Fraction]]) -> str:
    return "".join(f"{u}\t{v}\t{w}\n" for u, v, w in edges)


def parse_omega_file(text: str) -> frozenset[str]:
    out: dict[str, int] = {}
    for lineno, line in _content_lines(text):
        v = line.strip()
        if any(c.isspace() for c in v):
            raise ParseError("one vertex identifier per line", lineno)
        if v in out:
            raise DuplicateVertex(f"line {lineno}: vertex {v!r} already listed on line {out[v]}")
        out[v] = lineno
    return frozenset(out)


def read_graph(path: str | Path) -> WeightedGraph:
    return parse_graph_file(Path(path).read_text(encoding="utf-8"))


def read_omega(path: str | Path) -> frozenset[str]:
    return parse_omega_file(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return _string(str(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return _string("inf" if x > 0 else "-inf" if x < 0 else "nan")
        if x == 0.0:
            x = 0.0
        return f"{x:.17g}" if "e" in f"{x:.17g}" or "." in f"{x:.17g}" else f"{x:.17g}.0"
    if isinstance(x, str):
        return _string(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _string(s: str) -> str:
    import json

    return json.dumps(s, ensure_ascii=False)


def dumps(obj, indent: int = 2) -> str:
    """JSON with exact rationals as ``"p/q"`` strings and 17-digit floats.

    Mapping key order is preserved, so equal inputs give identical bytes.
    """

    def walk(o, depth):
        pad = " " * (indent * (depth + 1))
        end = " " * (indent * depth)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{_string(str(k))}: {walk(v, depth + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            seq = list(o)
            if not seq:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
                return "[" + ", ".join(_scalar(v) for v in seq) + "]"
            items = [f"{pad}{walk(v, depth + 1)}" for v in seq]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        return _scalar(o)

    return walk(obj, 0) + "\n"
