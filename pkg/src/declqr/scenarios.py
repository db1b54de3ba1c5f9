"""Scenario files: JSON descriptions of one analysis run.

Schema (all graphs are 1-based adjacency lists {source: [targets...]};
matrices are nested row-major arrays):

    {
      "task": "synthesize" | "cost" | "ratio" | "dominate"
              | "theorems" | "oracle-check",
      "partition": [1, 1, 1]                  # or {"dims": [...], "input_dims": [...]}
      "plant_graph": {"1": [2], "2": [1, 2, 3], "3": [2]},
      "control_graph": {...},                 # optional; must contain the
                                              # plant graph for ratio/theorems
      "design_graph": {...},                  # optional, informational
      "epsilon": 1.0,
      "strategy": "deadbeat",                 # or "theta" | "lqr" |
                                              # "composed:{...}" | {"composed": {...}}
      "strategies": ["theta", "deadbeat"],    # dominate needs two, theorems any
      "plant": {"A": [[...]], "B": [[...]], "x0": [...],
                "Q": [[...]], "R": [[...]]},  # synthesize/cost only
      "sweep": {"min_param": 1e-6, "max_param": 1e6,
                "points_per_decade": 13, "pair_points_per_decade": 1,
                "random_trials": 32, "x0_random": 8},
      "ensemble": {"plants": 64, "magnitude": 1.0, "x0_random": 8},
      "seed": 0,
      "tolerance": 1e-8,
      "output": "out"
    }
"""

import json
import os

import numpy as np

from .graphs import DirectedGraph, is_supergraph
from .plants import Plant, SubsystemPartition, check_membership
from .strategies import get_strategy

TASKS = ("synthesize", "cost", "ratio", "dominate", "theorems", "oracle-check")


class ScenarioError(ValueError):
    """Scenario file fails validation; message names the offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _parse_graph(field, raw, q):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ScenarioError(field, "expected an adjacency-list object {source: [targets]}")
    try:
        lists = {int(j): [int(i) for i in targets] for j, targets in raw.items()}
    except (TypeError, ValueError) as exc:
        raise ScenarioError(field, f"vertices must be integers ({exc})") from None
    try:
        return DirectedGraph.from_adjacency_lists(q, lists)
    except ValueError as exc:
        raise ScenarioError(field, str(exc)) from None


def _parse_matrix(field, raw, shape):
    try:
        m = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(field, f"not a numeric array ({exc})") from None
    if m.shape != shape:
        raise ScenarioError(field, f"expected shape {shape}, got {m.shape}")
    return m


class Scenario:
    """Validated scenario ready to run."""

    def __init__(self, raw, path="<scenario>"):
        if not isinstance(raw, dict):
            raise ScenarioError("<root>", "scenario must be a JSON object")
        self.path = path
        unknown = set(raw) - {"task", "partition", "plant_graph", "control_graph",
                              "design_graph", "epsilon", "strategy", "strategies",
                              "plant", "sweep", "ensemble", "seed", "tolerance",
                              "output", "comment"}
        if unknown:
            raise ScenarioError(sorted(unknown)[0], "unknown scenario key")
        task = raw.get("task")
        if task not in TASKS:
            raise ScenarioError("task", f"expected one of {TASKS}, got {task!r}")
        self.task = task

        part_raw = raw.get("partition")
        if part_raw is None:
            raise ScenarioError("partition", "required")
        try:
            if isinstance(part_raw, dict):
                self.partition = SubsystemPartition(
                    tuple(part_raw.get("dims", ())),
                    tuple(part_raw["input_dims"]) if "input_dims" in part_raw else None)
            else:
                self.partition = SubsystemPartition(tuple(part_raw))
        except (TypeError, ValueError, KeyError) as exc:
            raise ScenarioError("partition", str(exc)) from None
        q = self.partition.q

        graph = _parse_graph("plant_graph", raw.get("plant_graph"), q)
        if graph is None:
            raise ScenarioError("plant_graph", "required")
        self.plant_graph = graph
        self.control_graph = _parse_graph("control_graph", raw.get("control_graph"), q)
        self.design_graph = _parse_graph("design_graph", raw.get("design_graph"), q)
        if self.control_graph is None:
            self.control_graph = (DirectedGraph.complete(q)
                                  if task in ("ratio", "theorems") else self.plant_graph)
        if task in ("ratio", "theorems") and not is_supergraph(self.control_graph,
                                                               self.plant_graph):
            raise ScenarioError("control_graph", "must contain every plant-graph edge "
                                                 "for ratio/theorems tasks")

        eps = raw.get("epsilon", 1.0)
        if not (isinstance(eps, (int, float)) and eps > 0):
            raise ScenarioError("epsilon", f"must be a positive number, got {eps!r}")
        self.epsilon = float(eps)

        specs = raw.get("strategies")
        if specs is None:
            one = raw.get("strategy")
            if one is not None:
                specs = [one]
            elif task == "theorems":
                specs = ["deadbeat", "theta"]
            elif task == "dominate":
                specs = ["theta", "deadbeat"]
            else:
                specs = ["deadbeat"]
        if not isinstance(specs, list) or not specs:
            raise ScenarioError("strategies", "expected a non-empty list")
        try:
            self.strategies = [get_strategy(s) for s in specs]
        except ValueError as exc:
            raise ScenarioError("strategies", str(exc)) from None
        if task == "dominate" and len(self.strategies) != 2:
            raise ScenarioError("strategies", "dominate compares exactly two strategies")

        self.plant = None
        if raw.get("plant") is not None:
            praw = raw["plant"]
            if not isinstance(praw, dict) or "A" not in praw or "B" not in praw:
                raise ScenarioError("plant", "expected an object with A, B and x0")
            n, m = self.partition.n, self.partition.m
            a = _parse_matrix("plant.A", praw["A"], (n, n))
            b = _parse_matrix("plant.B", praw["B"], (n, m))
            x0 = _parse_matrix("plant.x0", praw.get("x0", [0.0] * n), (n,))
            kw = {}
            if praw.get("Q") is not None:
                kw["Q"] = _parse_matrix("plant.Q", praw["Q"], (n, n))
            if praw.get("R") is not None:
                kw["R"] = _parse_matrix("plant.R", praw["R"], (m, m))
            try:
                self.plant = Plant(self.partition, a, b, x0, self.epsilon, **kw)
            except ValueError as exc:
                raise ScenarioError("plant", str(exc)) from None
            bad = check_membership(self.plant, self.plant_graph)
            if bad:
                raise ScenarioError("plant", "; ".join(bad))
        elif task in ("synthesize", "cost"):
            raise ScenarioError("plant", f"the {task} task needs an explicit plant")

        for key in ("sweep", "ensemble"):
            val = raw.get(key, {})
            if not isinstance(val, dict):
                raise ScenarioError(key, "expected an object")
        self.sweep = dict(raw.get("sweep", {}))
        self.ensemble = dict(raw.get("ensemble", {}))

        seed = raw.get("seed", 0)
        if not isinstance(seed, int) or seed < 0:
            raise ScenarioError("seed", f"must be a non-negative integer, got {seed!r}")
        self.seed = seed
        tol = raw.get("tolerance", 1e-8)
        if not (isinstance(tol, (int, float)) and tol > 0):
            raise ScenarioError("tolerance", f"must be a positive number, got {tol!r}")
        self.tolerance = float(tol)
        out = raw.get("output", "out")
        if not isinstance(out, str) or not out:
            raise ScenarioError("output", "must be a non-empty string")
        self.output = out


def load_scenario(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ScenarioError("<file>", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError("<file>", f"invalid JSON in {path}: {exc}") from None
    return Scenario(raw, path=path)


def _graph_lists(edges_by_source):
    return {str(j): targets for j, targets in edges_by_source.items()}


_STAR_PLANT_GRAPH = {"1": [2], "2": [1, 2, 3], "3": [2]}
_SINK_VARIANT_GRAPH = {"2": [1, 2, 3], "3": [2]}


def generate_example_scenarios(output_dir):
    """Write ready-to-run scenario files; returns the list of paths."""
    os.makedirs(output_dir, exist_ok=True)
    star_control = {"1": [1, 2], "2": [1, 2, 3], "3": [2, 3]}
    scenarios = {
        "star_cost.json": {
            "comment": "three-subsystem star interconnection; middle node feeds both ends",
            "task": "cost",
            "partition": [1, 1, 1],
            "plant_graph": _STAR_PLANT_GRAPH,
            "epsilon": 1.0,
            "strategy": "deadbeat",
            "plant": {
                "A": [[0.0, 0.4, 0.0], [0.3, 0.5, -0.2], [0.0, 0.6, 0.0]],
                "B": [[1.0, 0.0, 0.0], [0.0, 1.2, 0.0], [0.0, 0.0, 1.5]],
                "x0": [0.6, -0.48, 0.64],
            },
            "seed": 7,
        },
        "star_synthesize.json": {
            "task": "synthesize",
            "partition": [1, 1, 1],
            "plant_graph": _STAR_PLANT_GRAPH,
            "epsilon": 1.0,
            "strategies": ["deadbeat", "theta", "lqr"],
            "plant": {
                "A": [[0.0, 0.4, 0.0], [0.3, 0.5, -0.2], [0.0, 0.6, 0.0]],
                "B": [[1.0, 0.0, 0.0], [0.0, 1.2, 0.0], [0.0, 0.0, 1.5]],
                "x0": [0.6, -0.48, 0.64],
            },
            "seed": 7,
        },
        "star_ratio.json": {
            "task": "ratio",
            "partition": [1, 1, 1],
            "plant_graph": _STAR_PLANT_GRAPH,
            "control_graph": star_control,
            "epsilon": 1.0,
            "strategy": "deadbeat",
            "seed": 7,
        },
        "star_theorems.json": {
            "task": "theorems",
            "partition": [1, 1, 1],
            "plant_graph": _STAR_PLANT_GRAPH,
            "control_graph": star_control,
            "epsilon": 1.0,
            "strategies": ["deadbeat", "theta"],
            "seed": 7,
        },
        "sink_variant_theorems.json": {
            "comment": "star variant where subsystem 1 affects nobody (a sink)",
            "task": "theorems",
            "partition": [1, 1, 1],
            "plant_graph": _SINK_VARIANT_GRAPH,
            "epsilon": 1.0,
            "strategies": ["deadbeat", "theta"],
            "seed": 7,
        },
        "fed_sink_theorems.json": {
            "comment": "a sink with a self-loop, fed from upstream: the ratio is only approached",
            "task": "theorems",
            "partition": [1, 1],
            "plant_graph": {"1": [2], "2": [2]},
            "epsilon": 1.0,
            "strategies": ["theta"],
            "seed": 7,
        },
        "chain_theorems.json": {
            "comment": "silent non-sink feeding a decoupled sink: sink-aware design is optimal",
            "task": "theorems",
            "partition": [1, 1],
            "plant_graph": {"1": [2]},
            "epsilon": 1.0,
            "strategies": ["theta"],
            "seed": 7,
        },
        "selfloop_feeder_theorems.json": {
            "comment": "diagonal non-sink coupling with a decoupled sink: open regime",
            "task": "theorems",
            "partition": [1, 1],
            "plant_graph": {"1": [1, 2]},
            "epsilon": 1.0,
            "strategies": ["deadbeat", "theta"],
            "seed": 7,
        },
        "underactuated_cost.json": {
            "comment": "two subsystems, the sink has two states but one input",
            "task": "cost",
            "partition": {"dims": [1, 2], "input_dims": [1, 1]},
            "plant_graph": {"1": [2], "2": [2]},
            "epsilon": 1.0,
            "strategy": "theta",
            "plant": {
                "A": [[0.0, 0.0, 0.0], [1.0, 0.5, 0.0], [0.0, 0.0, 0.0]],
                "B": [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
                "x0": [1.0, 0.5, -0.5],
            },
            "seed": 7,
        },
        "dominate_sink.json": {
            "task": "dominate",
            "partition": [1, 1, 1],
            "plant_graph": _SINK_VARIANT_GRAPH,
            "epsilon": 1.0,
            "strategies": ["theta", "deadbeat"],
            "ensemble": {"plants": 48, "magnitude": 1.0},
            "seed": 11,
        },
        "oracle_check.json": {
            "task": "oracle-check",
            "partition": [1, 1, 1],
            "plant_graph": _STAR_PLANT_GRAPH,
            "strategies": ["deadbeat", "theta", "lqr"],
            "ensemble": {"plants": 24, "magnitude": 1.0},
            "seed": 13,
            "tolerance": 1e-8,
        },
    }
    paths = []
    for name, body in scenarios.items():
        path = os.path.join(output_dir, name)
        with open(path, "w") as fh:
            json.dump(body, fh, indent=2)
            fh.write("\n")
        paths.append(path)
    return paths
