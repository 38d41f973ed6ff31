"""Plain-text formats for degree sequences, multigraphs, trees and traces.

Degree files hold one integer per line, or ``k:c`` lines meaning ``c``
vertices of degree ``k``; both may be mixed and ``#`` starts a comment.
Multigraphs are an optional ``n <n>`` header followed by ``u v mult``
lines.  Trees are a ``root r`` header followed by ``child parent`` lines.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, TextIO

from .core import DegreeSequence, Multigraph, RootedTree
from .errors import SpecParse


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_degree_sequence(text: str) -> DegreeSequence:
    degrees: list[int] = []
    for lineno, line in _lines(text):
        try:
            if ":" in line:
                k, c = line.split(":")
                degrees.extend([int(k)] * int(c))
            else:
                degrees.append(int(line))
        except ValueError as exc:
            raise SpecParse(f"line {lineno}: cannot parse {line!r}") from exc
    if not degrees:
        raise SpecParse("no degrees found")
    return DegreeSequence(tuple(degrees))


def read_degree_sequence(path: str | Path) -> DegreeSequence:
    return parse_degree_sequence(Path(path).read_text())


def format_degree_sequence(d: DegreeSequence) -> str:
    return "".join(f"{x}\n" for x in d)


def format_multigraph(g: Multigraph) -> str:
    out = [f"n {g.n}\n"]
    out.extend(f"{u} {v} {m}\n" for u, v, m in g.edges())
    return "".join(out)


def parse_multigraph(text: str, n: int | None = None) -> Multigraph:
    edges = []
    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "n" and len(parts) == 2:
            n = int(parts[1])
            continue
        try:
            u, v, m = map(int, parts)
        except ValueError as exc:
            raise SpecParse(f"line {lineno}: expected 'u v mult', got {line!r}") from exc
        edges.append(((u, v), m))
    if n is None:
        n = max((max(u, v) for (u, v), _ in edges), default=0)
    return Multigraph(n, edges)


def format_tree(t: RootedTree) -> str:
    out = [f"root {t.root}\n"]
    out.extend(f"{c} {p}\n" for c, p in t.edges())
    return "".join(out)


def parse_tree(text: str) -> RootedTree:
    root = None
    edges = []
    for lineno, line in _lines(text):
        parts = line.split()
        if parts[0] == "root":
            root = int(parts[1])
            continue
        try:
            c, p = map(int, parts)
        except ValueError as exc:
            raise SpecParse(f"line {lineno}: expected 'child parent', got {line!r}") from exc
        edges.append((c, p))
    if root is None:
        raise SpecParse("missing 'root r' header")
    return RootedTree.from_edges(len(edges) + 1, edges, root)


def format_trace(pairs) -> str:
    """``k r_vertex r_index s_vertex s_index`` per coalescent step."""
    return "".join(
        f"{k} {r.vertex} {r.index} {s.vertex} {s.index}\n"
        for k, (r, s) in enumerate(pairs, start=1)
    )


def encode_key(key) -> str:
    """Compact text form of a nested tuple key, for CSV columns."""
    if isinstance(key, tuple):
        return "(" + " ".join(encode_key(x) for x in key) + ")"
    if key is None:
        return "-"
    return str(key)


def write_csv(path: str | Path | TextIO, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    if isinstance(path, (str, Path)):
        with open(path, "w", newline="") as fh:
            write_csv(fh, header, rows)
        return
    writer = csv.writer(path, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(list(row))


def histogram_csv(hist: Mapping) -> str:
    buf = io.StringIO()
    write_csv(buf, ["key", "count"], ((encode_key(k), c) for k, c in sorted(hist.items())))
    return buf.getvalue()


def table_csv(table: Mapping[tuple[int, int], int]) -> str:
    buf = io.StringIO()
    write_csv(buf, ["k", "l", "count"], ((k, l, c) for (k, l), c in sorted(table.items())))
    return buf.getvalue()


def exact_distribution_csv(dist: Mapping) -> str:
    buf = io.StringIO()
    rows = []
    for key, p in sorted(dist.items(), key=lambda kv: encode_key(kv[0])):
        p = Fraction(p)
        rows.append((encode_key(key), f"{p.numerator}/{p.denominator}"))
    write_csv(buf, ["key", "probability"], rows)
    return buf.getvalue()
