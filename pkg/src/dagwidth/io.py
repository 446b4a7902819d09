"""Edge-list and linkage-instance text formats, and JSON documents.

Graph block::

    # comment
    n m
    @labels a b "c d" ...     (optional, exactly n tokens, may span lines)
    u v [mult]                (m lines)

An instance file continues with ``@pairs`` followed by ``s t`` lines and an
optional ``@mode vertex|arc`` line.
"""

from __future__ import annotations

import json
import shlex
from pathlib import Path

from .digraph import Digraph
from .exceptions import InputError


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        if tokens:
            yield lineno, tokens


def _vertex(token: str, n: int, label_ids: dict, lineno: int) -> int:
    if token in label_ids:
        return label_ids[token]
    try:
        v = int(token)
    except ValueError:
        raise InputError(f"line {lineno}: unknown vertex {token!r}") from None
    if not 0 <= v < n:
        raise InputError(f"line {lineno}: vertex {v} outside 0..{n - 1}")
    return v


def parse_graph_and_rest(text: str):
    """Parse a graph block; return ``(digraph, remaining (lineno, tokens) list)``."""
    lines = list(_lines(text))
    if not lines:
        raise InputError("empty input")
    lineno, head = lines[0]
    if len(head) != 2:
        raise InputError(f"line {lineno}: expected header 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"line {lineno}: header must be two integers") from None
    if n < 0 or m < 0:
        raise InputError(f"line {lineno}: negative size in header")
    i = 1
    labels = None
    if i < len(lines) and lines[i][1][0] == "@labels":
        labels = list(lines[i][1][1:])
        i += 1
        while len(labels) < n and i < len(lines) and not lines[i][1][0].startswith("@"):
            labels.extend(lines[i][1])
            i += 1
        if len(labels) != n:
            raise InputError(f"@labels declares {len(labels)} names for {n} vertices")
        if len(set(labels)) != n:
            raise InputError("@labels contains duplicates")
    label_ids = {name: v for v, name in enumerate(labels)} if labels else {}
    arcs = []
    for _ in range(m):
        if i >= len(lines):
            raise InputError(f"expected {m} arc lines, found fewer")
        lineno, toks = lines[i]
        i += 1
        if toks[0].startswith("@") or len(toks) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'u v [mult]'")
        u = _vertex(toks[0], n, label_ids, lineno)
        v = _vertex(toks[1], n, label_ids, lineno)
        mult = 1
        if len(toks) == 3:
            try:
                mult = int(toks[2])
            except ValueError:
                raise InputError(f"line {lineno}: multiplicity must be an integer") from None
            if mult < 1:
                raise InputError(f"line {lineno}: multiplicity must be positive")
        if u == v:
            raise InputError(f"line {lineno}: self-loop at {toks[0]}")
        arcs.extend([(u, v)] * mult)
    return Digraph(n, arcs, labels), lines[i:], label_ids


def parse_graph(text: str) -> Digraph:
    D, rest, _ = parse_graph_and_rest(text)
    if rest:
        lineno, toks = rest[0]
        raise InputError(f"line {lineno}: unexpected content {' '.join(toks)!r}")
    return D


def parse_instance(text: str, default_mode: str = "vertex"):
    """Parse a linkage instance; returns ``(digraph, pairs, mode)``."""
    D, rest, label_ids = parse_graph_and_rest(text)
    pairs = []
    mode = default_mode
    section = None
    for lineno, toks in rest:
        if toks[0] == "@pairs":
            section = "pairs"
            if len(toks) > 1:
                raise InputError(f"line {lineno}: @pairs takes no arguments")
            continue
        if toks[0] == "@mode":
            if len(toks) != 2 or toks[1] not in ("vertex", "arc"):
                raise InputError(f"line {lineno}: expected '@mode vertex' or '@mode arc'")
            mode = toks[1]
            continue
        if section != "pairs" or len(toks) != 2:
            raise InputError(f"line {lineno}: unexpected content {' '.join(toks)!r}")
        pairs.append(tuple(_vertex(t, D.n, label_ids, lineno) for t in toks))
    if not pairs:
        raise InputError("instance has no @pairs")
    return D, pairs, mode


def format_graph(D: Digraph) -> str:
    """Inverse of :func:`parse_graph` (parallel arcs are written one per line)."""
    out = [f"{D.n} {D.m}"]
    if D.labels is not None:
        out.append("@labels " + " ".join(shlex.quote(x) for x in D.labels))
    for a in D.arcs:
        if D.labels is None:
            out.append(f"{a.tail} {a.head}")
        else:
            out.append(f"{shlex.quote(D.labels[a.tail])} {shlex.quote(D.labels[a.head])}")
    return "\n".join(out) + "\n"


def read_graph(path) -> Digraph:
    return parse_graph(Path(path).read_text())


def read_instance(path, default_mode: str = "vertex"):
    return parse_instance(Path(path).read_text(), default_mode)


def dumps(doc) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"
