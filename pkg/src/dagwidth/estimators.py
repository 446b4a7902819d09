"""scikit-learn style wrappers.

``fit`` takes a digraph in any form :func:`check_digraph` accepts.  Fitted
attributes end in an underscore and ``get_params``/``set_params`` come from
``BaseEstimator``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_bound, check_digraph, check_pairs
from .cops import decompose, game_cop_number
from .cycles import EXCEEDS, circumference_bounded
from .decomposition import validate
from .exceptions import InputError
from .linkage import (
    ARC,
    VERTEX,
    LinkageInstance,
    brute_force_linkage,
    dag_vertex_linkage,
    find_hitting_set_circ2,
    solve_vertex_linkage_circ2,
    solve_weak_linkage_acyclic,
    solve_weak_linkage_circ2,
    solve_weak_linkage_via_hitting_set,
)


class DagDecomposer(BaseEstimator):
    """Build a DAG-decomposition of width at most the circumference.

    Parameters
    ----------
    p : int or None
        Width bound; the circumference is used when None.
    intermediate_bags : bool
        Insert the union bag between consecutive cycle bags.
    """

    def __init__(self, p=None, intermediate_bags=False):
        self.p = p
        self.intermediate_bags = intermediate_bags

    def fit(self, X, y=None):
        D = check_digraph(X)
        p = None if self.p is None else check_bound(self.p, "p", 2)
        dec, cond, traces = decompose(D, p, intermediate_bags=self.intermediate_bags)
        self.digraph_ = D
        self.decomposition_ = dec
        self.condensation_ = cond
        self.traces_ = traces
        self.width_ = dec.width
        self.n_features_in_ = D.n
        return self

    def transform(self, X=None):
        """Bag membership matrix, one row per decomposition node."""
        check_is_fitted(self, "decomposition_")
        if X is not None and check_digraph(X).n != self.n_features_in_:
            raise InputError("digraph size differs from the fitted one")
        out = np.zeros((len(self.decomposition_), self.n_features_in_), dtype=bool)
        for h, bag in enumerate(self.decomposition_.bags):
            out[h, sorted(bag)] = True
        return out

    def score(self, X=None, y=None):
        """1.0 when the fitted decomposition validates, else 0.0."""
        check_is_fitted(self, "decomposition_")
        return float(validate(self.digraph_, self.decomposition_).ok)


class CopNumber(BaseEstimator):
    """Exact cop number of the helicopter game, searched up to ``c_max``."""

    def __init__(self, c_max=4, budget=500_000):
        self.c_max = c_max
        self.budget = budget

    def fit(self, X, y=None):
        D = check_digraph(X)
        self.cop_number_ = game_cop_number(D, check_bound(self.c_max, "c_max"), check_bound(self.budget, "budget"))
        self.n_features_in_ = D.n
        return self


class LinkageSolver(BaseEstimator):
    """Disjoint paths on a fixed digraph; ``predict`` takes the terminal pairs.

    ``method="auto"`` picks the acyclic solver, the circumference-2 reduction
    or the hitting-set pipeline (needs ``x_max``) in that order.
    ``method="brute"`` always backtracks.
    """

    def __init__(self, mode=VERTEX, method="auto", x_max=None, budget=100_000):
        self.mode = mode
        self.method = method
        self.x_max = x_max
        self.budget = budget

    def fit(self, X, y=None):
        if self.mode not in (VERTEX, ARC):
            raise InputError(f"mode must be {VERTEX!r} or {ARC!r}")
        if self.method not in ("auto", "brute"):
            raise InputError("method must be 'auto' or 'brute'")
        D = check_digraph(X)
        self.digraph_ = D
        self.acyclic_ = D.is_acyclic()
        self.circ_le_2_ = self.acyclic_ or circumference_bounded(D, 2) != EXCEEDS
        self.hitting_set_ = None
        if not self.circ_le_2_ and self.mode == ARC and self.x_max is not None:
            self.hitting_set_ = find_hitting_set_circ2(D, check_bound(self.x_max, "x_max", 0))
        self.n_features_in_ = D.n
        return self

    def _instance(self, pairs):
        return LinkageInstance(self.digraph_, check_pairs(pairs, self.digraph_.n), self.mode)

    def predict(self, pairs):
        """Paths as arc-id lists, or None when no linkage exists."""
        check_is_fitted(self, "digraph_")
        inst = self._instance(pairs)
        if self.method == "brute":
            return brute_force_linkage(inst, self.budget)
        if self.mode == VERTEX:
            if self.acyclic_:
                return dag_vertex_linkage(inst)
            if self.circ_le_2_:
                return solve_vertex_linkage_circ2(inst)
            raise InputError("vertex-disjoint paths are only solved for circumference <= 2; use method='brute'")
        if self.acyclic_:
            return solve_weak_linkage_acyclic(inst)
        if self.circ_le_2_:
            return solve_weak_linkage_circ2(inst)
        if self.hitting_set_ is None:
            raise InputError("no small hitting set known; set x_max or use method='brute'")
        return solve_weak_linkage_via_hitting_set(inst, self.x_max, self.budget, X=self.hitting_set_)
