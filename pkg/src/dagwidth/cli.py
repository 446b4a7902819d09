"""Command-line entry point: ``dagwidth <command> FILE [options]``.

Results go to stdout as JSON, a one-line summary goes to stderr.  Exit codes:
0 success or yes, 1 valid run with a negative answer, 2 bad input or failed
precondition, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .cops import decompose, game_cop_number, run_strategy, simulate_game
from .cycles import EXCEEDS, circumference_bounded
from .decomposition import DagDecomposition, validate
from .digraph import Digraph, is_strong, path_vertices, scc
from .exceptions import BudgetExceeded, CircumferenceError, InputError
from .io import dumps, format_graph, read_graph, read_instance
from .linkage import (
    ARC,
    VERTEX,
    LinkageInstance,
    brute_force_linkage,
    dag_vertex_linkage,
    find_hitting_set_circ2,
    reduce_circ2_vertex,
    reduce_circ2_weak,
    solve_vertex_linkage_circ2,
    solve_weak_linkage_acyclic,
    solve_weak_linkage_circ2,
    solve_weak_linkage_via_hitting_set,
)

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    p: int | None = None
    x_max: int | None = None
    c_max: int = 4
    budget: int = 1_000_000
    seed: int = 0
    robber: str = "adversarial"
    mode: str | None = None
    format: str = "json"
    trace: bool = False
    intermediate_bags: bool = False

    def __post_init__(self):
        for name in ("budget", "c_max"):
            if getattr(self, name) < 1:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.p is not None and self.p < 2:
            raise InputError("--p must be at least 2")
        if self.x_max is not None and self.x_max < 0:
            raise InputError("--x-max must be non-negative")


def _names(D: Digraph, vs):
    return [D.label(v) for v in vs]


def _answer(D: Digraph, pairs, paths, trace) -> tuple[dict, int]:
    if paths is None:
        return {"answer": "no", "paths": [], "reduction_trace": trace}, EXIT_NO
    vertex_paths = [_names(D, path_vertices(D, p, s)) for p, (s, _) in zip(paths, pairs)]
    return {"answer": "yes", "paths": vertex_paths, "reduction_trace": trace}, EXIT_OK


def cmd_scc(cfg: RunConfig):
    D = read_graph(cfg.inputs[0])
    cond = scc(D)
    doc = {
        "components": [_names(D, sorted(c)) for c in cond.components],
        "arcs": [list(a) for a in sorted(cond.arcs)],
        "strong": len(cond) == 1,
    }
    return doc, EXIT_OK, f"{len(cond)} strong components"


def cmd_circumference(cfg: RunConfig):
    D = read_graph(cfg.inputs[0])
    p_max = cfg.p if cfg.p is not None else max(2, D.n)
    c = circumference_bounded(D, p_max)
    doc = {"circumference": c, "p_max": p_max}
    if c == EXCEEDS:
        return doc, EXIT_NO, f"circumference exceeds {p_max}"
    return doc, EXIT_OK, f"circumference {c}"


def cmd_decompose(cfg: RunConfig):
    D = read_graph(cfg.inputs[0])
    dec, cond, traces = decompose(D, cfg.p, intermediate_bags=cfg.intermediate_bags)
    doc = dec.to_json(D)
    doc["validation"] = validate(D, dec).to_json()
    if cfg.trace:
        doc["traces"] = {}
        for i, (trace, old) in sorted(traces.items()):
            sub = trace.to_json()
            # relabel into the ids/labels of the whole graph
            sub["component"] = _names(D, sorted(cond.components[i]))
            doc["traces"][str(i)] = _relabel_trace(sub, trace.digraph, D, old)
    return doc, EXIT_OK, f"width {dec.width}, {len(dec)} nodes"


def _relabel_trace(doc, sub: Digraph, D: Digraph, old):
    if sub.labels is not None:
        return doc
    lookup = {v: D.label(old[v]) for v in range(sub.n)}

    def fix(x):
        if isinstance(x, list):
            return [fix(y) for y in x]
        return lookup.get(x, x) if isinstance(x, int) else x

    for node in doc["nodes"]:
        for key in ("bag", "territory"):
            node[key] = fix(node[key])
        for key, val in node["witnesses"].items():
            if key != "z":
                node["witnesses"][key] = fix(val)
    return doc


def _load_decomposition(path, D: Digraph) -> DagDecomposition:
    try:
        with open(path) as fh:
            doc = json.load(fh)
        return DagDecomposition.from_json(doc, D)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{path}: not a decomposition document ({exc})") from None


def cmd_validate(cfg: RunConfig):
    if len(cfg.inputs) != 2:
        raise InputError("validate-decomposition needs GRAPH and DECOMPOSITION")
    D = read_graph(cfg.inputs[0])
    dec = _load_decomposition(cfg.inputs[1], D)
    report = validate(D, dec)
    doc = report.to_json()
    doc["width"] = dec.width
    if report.ok:
        return doc, EXIT_OK, f"valid, width {dec.width}"
    bad = len(report.structural) + len(report.d1) + len(report.d2) + len(report.d3)
    return doc, EXIT_NO, f"invalid: {bad} violations"


def cmd_simulate(cfg: RunConfig):
    D = read_graph(cfg.inputs[0])
    if len(cfg.inputs) > 1:
        strategy = _load_decomposition(cfg.inputs[1], D)
    elif is_strong(D):
        p = cfg.p if cfg.p is not None else max(2, circumference_bounded(D, max(2, D.n)))
        strategy = run_strategy(D, p, intermediate_bags=cfg.intermediate_bags)
    else:
        strategy, _, _ = decompose(D, cfg.p, intermediate_bags=cfg.intermediate_bags)
    report = simulate_game(D, strategy, robber=cfg.robber, seed=cfg.seed, max_plays=cfg.budget)
    doc = report.to_json(D)
    good = report.caught and report.robber_monotone
    summary = f"{'caught' if report.caught else 'escaped'} after {report.plays} plays ({cfg.robber})"
    return doc, EXIT_OK if good else EXIT_NO, summary


def cmd_copnumber(cfg: RunConfig):
    D = read_graph(cfg.inputs[0])
    c = game_cop_number(D, cfg.c_max, cfg.budget)
    doc = {"cop_number": c, "c_max": cfg.c_max}
    if c == EXCEEDS:
        return doc, EXIT_NO, f"more than {cfg.c_max} cops needed"
    return doc, EXIT_OK, f"{c} cops"


def _instance(cfg: RunConfig, mode: str | None) -> LinkageInstance:
    D, pairs, file_mode = read_instance(cfg.inputs[0])
    return LinkageInstance(D, pairs, mode or cfg.mode or file_mode)


def _circ2(D: Digraph) -> bool:
    return circumference_bounded(D, 2) != EXCEEDS


def cmd_link(cfg: RunConfig):
    inst = _instance(cfg, VERTEX)
    D = inst.digraph
    trace: list = []
    if D.is_acyclic():
        paths = dag_vertex_linkage(inst, cfg.budget)
    elif _circ2(D):
        paths = solve_vertex_linkage_circ2(inst, cfg.budget, trace)
    else:
        raise CircumferenceError("link handles circumference <= 2; use 'brute' for small inputs")
    doc, code = _answer(D, inst.pairs, paths, trace)
    return doc, code, f"k={inst.k}: {doc['answer']}"


def cmd_weaklink(cfg: RunConfig):
    inst = _instance(cfg, ARC)
    D = inst.digraph
    trace: list = []
    if D.is_acyclic():
        paths = solve_weak_linkage_acyclic(inst, cfg.budget)
    elif _circ2(D):
        paths = solve_weak_linkage_circ2(inst, cfg.budget, trace)
    elif cfg.x_max is not None:
        paths = solve_weak_linkage_via_hitting_set(inst, cfg.x_max, cfg.budget, trace=trace)
    else:
        raise CircumferenceError("circumference > 2: pass --x-max for the hitting-set solver")
    doc, code = _answer(D, inst.pairs, paths, trace)
    return doc, code, f"k={inst.k}: {doc['answer']}"


def cmd_reduce(cfg: RunConfig):
    inst = _instance(cfg, None)
    if inst.mode == VERTEX:
        reduced, record = reduce_circ2_vertex(inst)
    else:
        reduced, record = reduce_circ2_weak(inst)
    doc = {
        "mode": inst.mode,
        "graph": format_graph(reduced.digraph),
        "pairs": [list(p) for p in reduced.pairs],
        "reduction_trace": record.to_json(),
        "splits": len(record.events),
    }
    return doc, EXIT_OK, f"{len(record.events)} splits"


def cmd_brute(cfg: RunConfig):
    inst = _instance(cfg, None)
    paths = brute_force_linkage(inst, cfg.budget)
    doc, code = _answer(inst.digraph, inst.pairs, paths, [])
    return doc, code, f"k={inst.k} ({inst.mode}): {doc['answer']}"


def cmd_hitting_set(cfg: RunConfig):
    D = read_graph(cfg.inputs[0])
    x_max = cfg.x_max if cfg.x_max is not None else 2
    X = find_hitting_set_circ2(D, x_max, cfg.budget)
    if X is None:
        return {"hitting_set": None, "x_max": x_max}, EXIT_NO, f"none of size <= {x_max}"
    return {"hitting_set": _names(D, sorted(X)), "x_max": x_max}, EXIT_OK, f"|X| = {len(X)}"


COMMANDS = {
    "scc": (cmd_scc, "strong components and condensation"),
    "circumference": (cmd_circumference, "longest cycle length up to --p"),
    "decompose": (cmd_decompose, "DAG-decomposition of width <= circumference"),
    "validate-decomposition": (cmd_validate, "check a decomposition JSON against a graph"),
    "simulate-game": (cmd_simulate, "replay the cop strategy against a robber"),
    "cop-number": (cmd_copnumber, "exact helicopter cop number up to --c-max"),
    "link": (cmd_link, "vertex-disjoint paths (acyclic or circumference <= 2)"),
    "weak-link": (cmd_weaklink, "arc-disjoint paths"),
    "reduce": (cmd_reduce, "show the acyclic reduction of a circumference-2 instance"),
    "brute": (cmd_brute, "exhaustive search oracle"),
    "hitting-set": (cmd_hitting_set, "smallest X with circumference(D - X) <= 2"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dagwidth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("inputs", nargs="+", metavar="FILE")
        sp.add_argument("--p", type=int, default=None, help="cycle length bound")
        sp.add_argument("--x-max", type=int, default=None)
        sp.add_argument("--c-max", type=int, default=4)
        sp.add_argument("--budget", type=int, default=1_000_000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--robber", choices=["adversarial", "random", "greedy"], default="adversarial")
        sp.add_argument("--mode", choices=[VERTEX, ARC], default=None)
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--trace", action="store_true", help="include strategy traces")
        sp.add_argument("--intermediate-bags", action="store_true")
    return parser


def _emit(doc, fmt: str) -> str:
    if fmt == "json":
        return dumps(doc)
    return "".join(f"{k}: {json.dumps(doc[k], sort_keys=True)}\n" for k in sorted(doc))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
        doc, code, summary = COMMANDS[cfg.command][0](cfg)
    except BudgetExceeded as exc:
        extra = f" ({exc.remaining} remaining)" if exc.remaining is not None else ""
        print(f"budget exceeded: {exc}{extra}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, CircumferenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(_emit(doc, cfg.format))
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
