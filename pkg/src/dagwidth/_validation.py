"""Input coercion shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

from .digraph import Digraph
from .exceptions import InputError


def check_digraph(X) -> Digraph:
    """Accept a Digraph, a square adjacency matrix of multiplicities, or ``(n, arcs)``.

    networkx graphs with integer nodes ``0..n-1`` also work.
    """
    if isinstance(X, Digraph):
        return X
    if isinstance(X, tuple) and len(X) == 2 and isinstance(X[0], numbers.Integral):
        n, arcs = X
        try:
            return Digraph(int(n), list(arcs))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if hasattr(X, "nodes") and hasattr(X, "edges") and hasattr(X, "is_directed"):
        if not X.is_directed():
            raise InputError("expected a directed graph")
        nodes = sorted(X.nodes)
        if nodes != list(range(len(nodes))):
            raise InputError("graph nodes must be 0..n-1")
        return Digraph(len(nodes), [(u, v) for u, v, *_ in X.edges])
    A = np.asarray(X)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"adjacency matrix must be square, got shape {A.shape}")
    if not np.issubdtype(A.dtype, np.integer) and not np.issubdtype(A.dtype, np.bool_):
        if not np.all(np.equal(np.mod(A, 1), 0)):
            raise InputError("adjacency entries must be whole multiplicities")
    A = A.astype(np.int64)
    if (A < 0).any():
        raise InputError("negative multiplicity")
    if np.diag(A).any():
        raise InputError("self-loops are not allowed")
    arcs = []
    for u, v in zip(*np.nonzero(A)):
        arcs.extend([(int(u), int(v))] * int(A[u, v]))
    return Digraph(A.shape[0], arcs)


def check_bound(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InputError(f"{name} must be at least {minimum}, got {value}")
    return int(value)


def check_pairs(pairs, n: int) -> list[tuple[int, int]]:
    out = []
    for pair in pairs:
        if len(pair) != 2:
            raise InputError(f"terminal pair {pair!r} does not have two entries")
        s, t = (int(x) for x in pair)
        for x in (s, t):
            if not 0 <= x < n:
                raise InputError(f"terminal {x} is not a vertex")
        out.append((s, t))
    if not out:
        raise InputError("need at least one terminal pair")
    return out
