"""Cost evaluation and worst-case analysis of design strategies.

Costs are the infinite-horizon quadratic value of a static gain; the
competitive ratio of a strategy divides that by the centralized optimum
for the same plant and initial state.  Worst cases are hunted with
small structured plant families, one per known hard pattern in the
plant graph, plus random members of the admissible set.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graphs import (DirectedGraph, has_loop, is_supergraph, isolated_nodes,
                     sink_block_partition, sinks)
from .plants import Plant, SubsystemPartition, normalize_weights, random_plant
from .solvers import shrink_factor, solve_dare, solve_dlyap, spectral_radius
from .strategies import deadbeat, deadbeat_strategy, sink_aware_strategy

ZERO_COST_TOL = 1e-14


class MotifNotFoundError(ValueError):
    """The plant graph lacks the pattern a plant family needs."""

    def __init__(self, kind, motif):
        super().__init__(f"family {kind!r} needs {motif} in the plant graph")
        self.kind = kind
        self.motif = motif


@dataclass(frozen=True)
class CostReport:
    """Cost of one gain on one plant; value is +inf when destabilizing."""

    value: float
    stable: bool
    method: str


def _gain_matrix(gain):
    return gain.K if hasattr(gain, "K") else np.asarray(gain, dtype=float)


def _weighted_terms(plant, k):
    """Closed loop F and the Lyapunov load F^T Q F + K^T R K."""
    f = plant.A + plant.B @ k
    q = plant.Q if plant.Q is not None else None
    r = plant.R if plant.R is not None else None
    fqf = f.T @ (q @ f) if q is not None else f.T @ f
    krk = k.T @ (r @ k) if r is not None else k.T @ k
    return f, fqf + krk


def closed_loop_cost(plant, gain, delta_stab=1e-9):
    """Infinite-horizon cost of u = K x from the plant's initial state.

    Solves Z = F^T Z F + (F^T Q F + K^T R K) directly for the shifted
    value matrix, so small costs keep full relative accuracy; the value
    is x0^T Z x0.  A closed loop with spectral radius at or above
    1 - delta_stab reports +inf.
    """
    k = _gain_matrix(gain)
    f, load = _weighted_terms(plant, k)
    if np.abs(f).max(initial=0.0) <= 1e-12 * max(1.0, np.abs(plant.A).max(initial=0.0)):
        value = float(plant.x0 @ load @ plant.x0)
        return CostReport(value=max(value, 0.0), stable=True, method="deadbeat-closed-form")
    if spectral_radius(f) >= 1.0 - delta_stab:
        return CostReport(value=math.inf, stable=False, method="lyapunov")
    z = solve_dlyap(f, load)
    value = float(plant.x0 @ z @ plant.x0)
    return CostReport(value=max(value, 0.0), stable=True, method="lyapunov")


def truncated_cost_oracle(plant, gain, horizon=2000):
    """Brute-force rollout cost: states 1..horizon plus inputs 0..horizon.

    Deliberately shares nothing with the Lyapunov route; used to
    cross-check it.
    """
    k = _gain_matrix(gain)
    q = plant.Q if plant.Q is not None else np.eye(plant.n)
    r = plant.R if plant.R is not None else np.eye(plant.m)
    x = np.array(plant.x0)
    total = 0.0
    for step in range(horizon + 1):
        u = k @ x
        total += float(u @ r @ u)
        x = plant.A @ x + plant.B @ u
        if step + 1 <= horizon:
            total += float(x @ q @ x)
    return total


def _optimal_value_matrix(plant):
    """PSD matrix Y with optimal cost x0^T Y x0, plus the DARE data.

    Y = A^T (X^{-1} + B B^T)^{-1} A equals X - I on the solution; the
    product form keeps relative accuracy when the coupling is weak.
    """
    sol = solve_dare(plant.A, plant.B)
    mid = np.linalg.inv(sol.X) + plant.B @ plant.B.T
    y = plant.A.T @ np.linalg.solve(mid, plant.A)
    return 0.5 * (y + y.T), sol


def optimal_cost(plant):
    """Centralized optimal cost from the plant's initial state."""
    p = normalize_weights(plant)
    y, _ = _optimal_value_matrix(p)
    value = float(p.x0 @ y @ p.x0)
    return CostReport(value=max(value, 0.0), stable=True, method="dare-closed-form")


@dataclass(frozen=True)
class BoundReport:
    """Floor on the optimal cost as a fraction of the deadbeat cost."""

    optimal_cost: float
    deadbeat_cost: float
    factor: float
    holds: bool
    slack: float


def optimal_vs_deadbeat_bound(plant, plant_graph=None, slack=1e-10):
    """Check J_opt >= s^2/(s^2+1) * J_deadbeat with s the smallest singular value of B."""
    p = normalize_weights(plant)
    smin = float(np.linalg.svd(p.B, compute_uv=False)[-1])
    factor = shrink_factor(smin * smin)
    j_db = closed_loop_cost(p, deadbeat(p, plant_graph)).value
    j_opt = optimal_cost(p).value
    return BoundReport(optimal_cost=j_opt, deadbeat_cost=j_db, factor=factor,
                       holds=j_opt >= factor * j_db - slack,
                       slack=float(j_opt - factor * j_db))


# ---------------------------------------------------------------------------
# adversarial plant families

def _first_index(partition, i):
    return partition.state_slice(i).start


def _basis_outer(n, row, col, value):
    a = np.zeros((n, n))
    a[row, col] = value
    return a


def _find_cross_edge(g):
    # Prefer a target that is not a sink: designs that treat sinks
    # specially only face the forced-cancellation argument on non-sinks.
    snk = set(sinks(g))
    fallback = None
    for (j, i) in sorted(g.edges):
        if j == i:
            continue
        if i not in snk:
            return i, j
        if fallback is None:
            fallback = (i, j)
    return fallback


def _find_nonsink_selfloop(g):
    snk = set(sinks(g))
    for v in range(1, g.q + 1):
        if g.has_edge(v, v) and v not in snk:
            return v
    return None


def _find_sink_selfloop(g):
    snk = set(sinks(g))
    for v in sorted(snk):
        if not g.has_edge(v, v):
            continue
        for j in g.predecessors(v):
            if j != v:
                return v, j
    return None


def _find_path(g):
    for k in range(1, g.q + 1):
        for i in sorted(g.successors(k)):
            if i == k:
                continue
            for j in sorted(g.successors(i)):
                if j not in (i, k):
                    return k, i, j
    return None


def _find_probe(g):
    # non-sink i fed by j, with out-neighbor k: tests exact cancellation of A_ij
    for i in range(1, g.q + 1):
        ks = [k for k in g.successors(i) if k != i]
        if not ks:
            continue
        for j in g.predecessors(i):
            if j != i:
                return i, j, ks[0]
    return None


FAMILY_KINDS = ("rank_one_cross", "nonsink_selfloop", "sink_selfloop",
                "path", "loop", "decoupling_probe")

_LIMIT_NOTES = {
    "nonsink_selfloop": "supremum approached as r -> 0; grid maximum reported",
    "sink_selfloop": "supremum approached as r, s -> inf with s/r -> inf; grid maximum reported",
    "path": "worst case reached in a parameter limit; grid extremum reported",
    "loop": "worst case reached in a parameter limit; grid extremum reported",
}


def adversarial_family(kind, plant_graph, partition=None, epsilon=1.0, params=None):
    """One member of the named structured family, as a Plant.

    Families are rank-one or few-entry plants that concentrate the
    difficulty of a graph pattern: a lone cross edge, a self-loop, a
    fed sink with a self-loop, a two-edge path, a loop, or a probe pair
    for the cancellation requirement.  Raises MotifNotFoundError when
    the graph lacks the needed pattern.
    """
    if partition is None:
        partition = SubsystemPartition.scalars(plant_graph.q)
    if partition.input_dims != partition.dims:
        raise ValueError("families are defined for fully actuated partitions")
    if plant_graph.q != partition.q:
        raise ValueError(f"graph has {plant_graph.q} vertices but partition has {partition.q}")
    params = dict(params or {})
    n = partition.n
    b = epsilon * np.eye(n)
    if kind == "rank_one_cross":
        sel = (params["i"], params["j"]) if {"i", "j"} <= set(params) else _find_cross_edge(plant_graph)
        if sel is None:
            raise MotifNotFoundError(kind, "an edge between two distinct subsystems")
        i, j = sel
        if not plant_graph.has_edge(j, i) or i == j:
            raise ValueError(f"no edge {j}->{i} between distinct subsystems")
        scale = float(params.get("scale", 1.0))
        i1, j1 = _first_index(partition, i), _first_index(partition, j)
        a = _basis_outer(n, i1, j1, scale)
        x0 = np.eye(n)[j1]
    elif kind == "nonsink_selfloop":
        v = params.get("i") or _find_nonsink_selfloop(plant_graph)
        if v is None:
            raise MotifNotFoundError(kind, "a self-loop on a non-sink vertex")
        r = float(params.get("r", 1.0))
        i1 = _first_index(partition, v)
        a = _basis_outer(n, i1, i1, r)
        x0 = np.eye(n)[i1]
    elif kind == "sink_selfloop":
        sel = (params["i"], params["j"]) if {"i", "j"} <= set(params) else _find_sink_selfloop(plant_graph)
        if sel is None:
            raise MotifNotFoundError(kind, "a sink with a self-loop and an incoming edge")
        i, j = sel
        r = float(params.get("r", 1.0))
        s = float(params.get("s", 1.0))
        i1, j1 = _first_index(partition, i), _first_index(partition, j)
        a = _basis_outer(n, i1, i1, r) + _basis_outer(n, i1, j1, s)
        x0 = np.eye(n)[j1]
    elif kind == "path":
        sel = ((params["k"], params["i"], params["j"]) if {"i", "j", "k"} <= set(params)
               else _find_path(plant_graph))
        if sel is None:
            raise MotifNotFoundError(kind, "a directed path over three distinct subsystems")
        k, i, j = sel
        r = float(params.get("r", 1.0))
        s = float(params.get("s", 1.0))
        k1, i1, j1 = (_first_index(partition, v) for v in (k, i, j))
        a = _basis_outer(n, i1, k1, r) + _basis_outer(n, j1, i1, s)
        x0 = np.eye(n)[k1]
    elif kind == "loop":
        cycle = params.get("cycle")
        if cycle is None:
            found, cycle = has_loop(plant_graph)
            if not found:
                raise MotifNotFoundError(kind, "a loop")
        r = float(params.get("r", 1.0))
        a = np.zeros((n, n))
        for t, v in enumerate(cycle):
            w = cycle[(t + 1) % len(cycle)]
            a[_first_index(partition, w), _first_index(partition, v)] = r
        x0 = np.eye(n)[_first_index(partition, cycle[0])]
    elif kind == "decoupling_probe":
        sel = ((params["i"], params["j"], params["k"]) if {"i", "j", "k"} <= set(params)
               else _find_probe(plant_graph))
        if sel is None:
            raise MotifNotFoundError(kind, "a fed non-sink vertex with an out-edge")
        i, j, k = sel
        a_ij = float(params.get("a_ij", 1.0))
        r = float(params.get("r", 1.0))
        i1, j1, k1 = (_first_index(partition, v) for v in (i, j, k))
        a = _basis_outer(n, i1, j1, a_ij) + _basis_outer(n, k1, i1, r)
        x0 = np.eye(n)[j1]
    else:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
    return Plant(partition, a, b, x0, epsilon)


# ---------------------------------------------------------------------------
# closed forms for the fed self-loop sink family

def selfloop_optimal_cost(r, epsilon):
    """Centralized optimal cost of A = r e e^T, B = eps I, from x0 = e."""
    e2 = float(epsilon) ** 2
    rad = (r * r + e2 - 1.0) ** 2 + 4.0 * e2
    return (math.sqrt(rad) + r * r - e2 - 1.0) / (2.0 * e2)


def sink_selfloop_cost_coefficients(r, s, epsilon):
    """Cost coefficients (beta_strategy, beta_optimal) for the fed sink family.

    The family has a_{i1 i1} = r, a_{i1 j1} = s and B = eps I; both the
    sink-aware cost and the centralized optimum are beta * (a^T x0)^2
    with a the nonzero row of A.  Requires r != 0.
    """
    if r == 0:
        raise ValueError("r must be nonzero: the self-loop entry scales the sink recursion")
    r = float(r)
    s = float(s)
    e2 = float(epsilon) ** 2
    rad = (r * r + e2 - 1.0) ** 2 + 4.0 * e2
    beta_strategy = (math.sqrt(rad) + r * r - e2 - 1.0) / (2.0 * e2 * r * r)
    m0 = e2 * s * s + (e2 + 1.0) ** 2
    c_plus = m0 + (r * r + 2.0 * r) * (e2 + 1.0)
    c_minus = m0 + (r * r - 2.0 * r) * (e2 + 1.0)
    beta_optimal = ((e2 * s * s + r * r * (1.0 + e2) - (e2 + 1.0) ** 2
                     + math.sqrt(c_plus * c_minus))
                    / (2.0 * e2 * (e2 + 1.0) * (s * s + r * r)))
    return beta_strategy, beta_optimal


# ---------------------------------------------------------------------------
# competitive-ratio estimation

@dataclass(frozen=True)
class SweepPoint:
    """One swept plant: costs and ratio at the worst sampled x0."""

    family: str
    param_r: float
    param_s: float
    epsilon: float
    cost_strategy: float
    cost_optimal: float
    ratio: float


@dataclass(frozen=True)
class RatioReport:
    estimated_ratio: float
    witness_plant: Plant
    witness_x0: np.ndarray
    family: str
    limit_note: str
    sweep: tuple


@dataclass(frozen=True)
class RatioConfig:
    partition: SubsystemPartition = None
    min_param: float = 1e-6
    max_param: float = 1e6
    points_per_decade: int = 13
    pair_points_per_decade: float = 1.0
    random_trials: int = 32
    random_magnitude: float = 2.0
    x0_random: int = 8
    seed: int = 0
    families: tuple = None
    gain_match_tol: float = 1e-12
    delta_stab: float = 1e-9
    jobs: int = 1


def _log_grid(lo, hi, per_decade):
    decades = math.log10(hi / lo)
    num = max(2, int(round(decades * per_decade)) + 1)
    return np.geomspace(lo, hi, num=num)


def _ratio_value(num, den):
    # Both costs at numerical zero means the initial state is already
    # uncontrolled-free; call that a ratio of one rather than 0/0.
    if num <= ZERO_COST_TOL and den <= ZERO_COST_TOL:
        return 1.0
    if den == 0.0:
        return math.inf
    if math.isinf(num):
        return math.inf
    return num / den


def _x0_sweep(n, extra, rng):
    vs = [np.eye(n)[i] for i in range(n)]
    for _ in range(extra):
        v = rng.standard_normal(n)
        vs.append(v / np.linalg.norm(v))
    return vs


def _parallel_map(fn, items, jobs):
    if jobs <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _applicable_families(g):
    out = []
    if _find_cross_edge(g):
        out.append("rank_one_cross")
    if _find_nonsink_selfloop(g):
        out.append("nonsink_selfloop")
    if _find_sink_selfloop(g):
        out.append("sink_selfloop")
    if _find_path(g):
        out.append("path")
    if has_loop(g)[0]:
        out.append("loop")
    if _find_probe(g):
        out.append("decoupling_probe")
    return tuple(out)


def competitive_ratio_estimate(strategy, plant_graph, control_graph=None,
                               epsilon=1.0, config=None):
    """Estimate the worst cost ratio of a strategy against the centralized optimum.

    Sweeps every structured family the plant graph admits over a log
    parameter grid, adds random admissible plants, and maximizes the
    per-plant ratio over canonical plus random unit initial states.
    The denominator is always the centralized optimum, so the result
    lower-bounds the ratio against any structured optimum as well.
    Zero-over-zero samples count as 1; the report keeps the worst
    witness and, for families that only approach their supremum, a
    limit note.
    """
    cfg = config or RatioConfig()
    if control_graph is None:
        control_graph = DirectedGraph.complete(plant_graph.q)
    if not is_supergraph(control_graph, plant_graph):
        raise ValueError("the control graph must contain every plant-graph edge")
    part = cfg.partition or SubsystemPartition.scalars(plant_graph.q)
    kinds = cfg.families if cfg.families is not None else _applicable_families(plant_graph)

    items = []
    for kind in kinds:
        if kind == "rank_one_cross":
            items.append((kind, {"scale": 1.0}))
        elif kind in ("nonsink_selfloop", "loop", "decoupling_probe"):
            for r in _log_grid(cfg.min_param, cfg.max_param, cfg.points_per_decade):
                items.append((kind, {"r": float(r)}))
        else:
            grid = _log_grid(cfg.min_param, cfg.max_param, cfg.pair_points_per_decade)
            for r in grid:
                for s in grid:
                    items.append((kind, {"r": float(r), "s": float(s)}))
    for t in range(cfg.random_trials):
        items.append(("random", {"trial": t}))

    def evaluate(indexed):
        idx, (kind, params) = indexed
        if kind == "random":
            plant = random_plant(plant_graph, part, epsilon, cfg.random_magnitude,
                                 rng=np.random.default_rng([cfg.seed, 1, params["trial"]]))
        else:
            plant = adversarial_family(kind, plant_graph, part, epsilon, params)
        gain = strategy.synthesize(plant, plant_graph)
        y_opt, sol = _optimal_value_matrix(plant)
        bx = plant.B.T @ sol.X
        k_star = -np.linalg.solve(np.eye(plant.m) + bx @ plant.B, bx @ plant.A)
        matched = (np.abs(gain.K - k_star).max(initial=0.0)
                   <= cfg.gain_match_tol * (1.0 + np.abs(k_star).max(initial=0.0)))
        x0s = _x0_sweep(plant.n, cfg.x0_random, np.random.default_rng([cfg.seed, 2, idx]))
        if matched:
            den = max(float(x0s[0] @ y_opt @ x0s[0]), 0.0)
            point = SweepPoint(kind, params.get("r"), params.get("s"), epsilon,
                               den, den, 1.0)
            return point, 1.0, plant, x0s[0]
        f = plant.A + plant.B @ gain.K
        unstable = spectral_radius(f) >= 1.0 - cfg.delta_stab
        z = None if unstable else solve_dlyap(f, f.T @ f + gain.K.T @ gain.K)
        best = (-math.inf, None, 0.0, 0.0)
        for x0 in x0s:
            den = max(float(x0 @ y_opt @ x0), 0.0)
            num = math.inf if unstable else max(float(x0 @ z @ x0), 0.0)
            if math.isinf(num) and den <= ZERO_COST_TOL:
                continue
            ratio = _ratio_value(num, den)
            if ratio > best[0]:
                best = (ratio, x0, num, den)
        if best[1] is None:
            return None
        ratio, x0, num, den = best
        point = SweepPoint(kind, params.get("r"), params.get("s"), epsilon,
                           num, den, ratio)
        return point, ratio, plant, x0

    results = _parallel_map(evaluate, list(enumerate(items)), cfg.jobs)
    sweep = []
    best = (-math.inf, None, None, None)
    for res in results:
        if res is None:
            continue
        point, ratio, plant, x0 = res
        sweep.append(point)
        if ratio > best[0]:
            best = (ratio, plant, x0, point.family)
    sweep.sort(key=lambda p: (p.family, p.param_r if p.param_r is not None else -1.0,
                              p.param_s if p.param_s is not None else -1.0))
    if best[1] is None:
        return RatioReport(estimated_ratio=1.0, witness_plant=None, witness_x0=None,
                           family=None, limit_note="no applicable family and no samples",
                           sweep=tuple(sweep))
    ratio, plant, x0, fam = best
    return RatioReport(estimated_ratio=ratio, witness_plant=plant, witness_x0=x0,
                       family=fam, limit_note=_LIMIT_NOTES.get(fam), sweep=tuple(sweep))


# ---------------------------------------------------------------------------
# domination

@dataclass(frozen=True)
class DominationWitness:
    plant: Plant
    x0: np.ndarray
    cost_first: float
    cost_second: float


@dataclass(frozen=True)
class DominationReport:
    verdict: str
    strict_witness: DominationWitness
    max_violation: float
    samples: int


@dataclass(frozen=True)
class DominationConfig:
    partition: SubsystemPartition = None
    plants: int = 64
    magnitude: float = 1.0
    x0_random: int = 8
    seed: int = 0
    slack: float = 1e-10
    strict_tol: float = 1e-8
    jobs: int = 1


def domination_compare(strategy_a, strategy_b, plant_graph, epsilon=1.0, config=None):
    """Pointwise cost comparison of two strategies over a sampled plant set.

    Verdicts speak only about the sample: one strategy dominates when
    its cost is never worse (within slack) and strictly better at least
    once; max_violation is the smaller of the two directions' worst
    overshoots, zero when a domination is clean.
    """
    cfg = config or DominationConfig()
    part = cfg.partition or SubsystemPartition.scalars(plant_graph.q)

    def evaluate(t):
        plant = random_plant(plant_graph, part, epsilon, cfg.magnitude,
                             rng=np.random.default_rng([cfg.seed, 3, t]))
        ga = strategy_a.synthesize(plant, plant_graph)
        gb = strategy_b.synthesize(plant, plant_graph)
        rows = []
        x0s = _x0_sweep(plant.n, cfg.x0_random, np.random.default_rng([cfg.seed, 4, t]))
        for x0 in x0s:
            p = plant.with_x0(x0)
            ja = closed_loop_cost(p, ga).value
            jb = closed_loop_cost(p, gb).value
            rows.append((p, x0, ja, jb))
        return rows

    samples = [row for rows in _parallel_map(evaluate, range(cfg.plants), cfg.jobs)
               for row in rows]
    over_a = 0.0   # worst amount by which A exceeds B
    over_b = 0.0
    strict_a = None
    strict_b = None
    gap_a = gap_b = 0.0
    for (p, x0, ja, jb) in samples:
        if math.isinf(ja) and math.isinf(jb):
            continue
        diff = ja - jb if not (math.isinf(ja) or math.isinf(jb)) else (
            math.inf if math.isinf(ja) else -math.inf)
        scale = max(1.0, min(ja, jb)) if not math.isinf(min(ja, jb)) else 1.0
        if diff > cfg.slack:
            over_a = max(over_a, diff)
        if -diff > cfg.slack:
            over_b = max(over_b, -diff)
        if -diff > cfg.strict_tol * scale and (strict_a is None or -diff > gap_a):
            strict_a = DominationWitness(p, x0, ja, jb)
            gap_a = -diff
        if diff > cfg.strict_tol * scale and (strict_b is None or diff > gap_b):
            strict_b = DominationWitness(p, x0, ja, jb)
            gap_b = diff
    a_never_worse = over_a == 0.0
    b_never_worse = over_b == 0.0
    if a_never_worse and strict_a is not None:
        verdict, witness = "first-dominates-on-sample", strict_a
    elif b_never_worse and strict_b is not None:
        verdict, witness = "second-dominates-on-sample", strict_b
    elif a_never_worse and b_never_worse:
        verdict, witness = "equal-on-sample", None
    else:
        verdict, witness = "incomparable-on-sample", None
    return DominationReport(verdict=verdict, strict_witness=witness,
                            max_violation=min(over_a, over_b), samples=len(samples))


# ---------------------------------------------------------------------------
# certification table

@dataclass(frozen=True)
class CertificationRow:
    name: str
    strategy: str
    expected: float
    computed: float
    tolerance: float
    status: str
    note: str = ""


@dataclass(frozen=True)
class CertificationConfig:
    ratio: RatioConfig = field(default_factory=RatioConfig)
    eq_tol: float = 1e-8
    limit_tol: float = 1e-2
    bound_slack: float = 1e-6


@dataclass(frozen=True)
class CertificationResult:
    rows: tuple
    sweep: tuple

    def __iter__(self):
        return iter(self.rows)


def _family_max(report, kind):
    vals = [p.ratio for p in report.sweep if p.family == kind]
    return max(vals) if vals else None


def _is_comm_less(strategy, q):
    return strategy.design_graph(q).edges == DirectedGraph.self_loops(q).edges


def certification_suite(plant_graph, control_graph=None, epsilon=1.0,
                        strategies=None, config=None):
    """One table row per applicable worst-case guarantee, checked numerically.

    Exact-ratio statements are checked as equalities at eq_tol; bounds
    that are only approached in a parameter limit allow limit_tol on the
    low side; open regimes yield OPEN rows that report the computed
    value without judging it.
    """
    cfg = config or CertificationConfig()
    if control_graph is None:
        control_graph = DirectedGraph.complete(plant_graph.q)
    if strategies is None:
        strategies = [deadbeat_strategy(), sink_aware_strategy()]
    q = plant_graph.q
    bound = 1.0 + 1.0 / float(epsilon) ** 2
    sbp = sink_block_partition(plant_graph)
    iso = isolated_nodes(plant_graph)
    complete_gk = control_graph.edges == DirectedGraph.complete(q).edges
    rows = []
    sweep = []
    for st in strategies:
        report = competitive_ratio_estimate(st, plant_graph, control_graph, epsilon, cfg.ratio)
        sweep.extend(report.sweep)
        est = report.estimated_ratio
        comm_less = _is_comm_less(st, q)
        rows_before = len(rows)
        if st.name == "deadbeat":
            if iso:
                rows.append(CertificationRow(
                    "deadbeat worst-case ratio", st.name, None, est, None, "INFO",
                    f"isolated vertices {iso} leave the exact-ratio statement inapplicable"))
            else:
                ok = abs(est - bound) <= cfg.eq_tol * bound
                rows.append(CertificationRow(
                    "deadbeat worst-case ratio equals 1 + 1/eps^2", st.name,
                    bound, est, cfg.eq_tol, "PASS" if ok else "FAIL",
                    "attained at the single-cross-edge family" if report.family == "rank_one_cross" else (report.limit_note or "")))
        if st.name in ("sink_aware", "theta") and sbp.sinks:
            if sbp.s11_zero and sbp.s22_zero:
                ok = est == 1.0
                rows.append(CertificationRow(
                    "sink-aware ratio is exactly 1 (decoupled sinks, silent non-sinks)",
                    st.name, 1.0, est, 0.0, "PASS" if ok else "FAIL",
                    "sink-aware synthesis coincides with the centralized optimum here"))
            elif not sbp.s11_diagonal:
                ok = abs(est - bound) <= cfg.eq_tol * bound
                rows.append(CertificationRow(
                    "sink-aware worst-case ratio equals 1 + 1/eps^2", st.name,
                    bound, est, cfg.eq_tol, "PASS" if ok else "FAIL",
                    "attained at a cross edge between non-sinks"
                    if report.family == "rank_one_cross" else (report.limit_note or "")))
            else:
                ok = (est >= bound - cfg.limit_tol) and (est <= bound + cfg.eq_tol * bound)
                if sbp.s11_zero:
                    note = ("approached from below as the fed-sink parameters grow; "
                            "grid maximum reported")
                else:
                    note = ("approached from below as a non-sink self-loop weight "
                            "shrinks; grid maximum reported")
                if not complete_gk:
                    note += "; centralized denominator lower-bounds structured optima"
                rows.append(CertificationRow(
                    "sink-aware worst-case ratio approaches 1 + 1/eps^2", st.name,
                    bound, est, cfg.limit_tol, "PASS" if ok else "FAIL", note))
        if comm_less:
            sink_free = not sbp.sinks
            hard_sinks = sbp.sinks and ((not sbp.s11_diagonal) or (not sbp.s22_zero))
            open_cell = sbp.sinks and sbp.s11_diagonal and not sbp.s11_zero and sbp.s22_zero
            if sink_free or hard_sinks:
                # The finite grid under-estimates a supremum, so a floor that
                # is only approached in a limit gets the looser tolerance.
                attained = any(i not in set(sbp.sinks) for (j, i) in plant_graph.edges
                               if j != i)
                slack = cfg.bound_slack if attained else cfg.limit_tol
                ok = est >= bound - slack
                note = "every communication-less design obeys this floor"
                if not attained:
                    note += "; floor approached in a parameter limit on this graph"
                if hard_sinks and not complete_gk:
                    note += "; proven for a complete control graph, reported here as evidence"
                rows.append(CertificationRow(
                    "communication-less ratio floor 1 + 1/eps^2", st.name,
                    bound, est, slack, "PASS" if ok else "FAIL", note))
            elif open_cell:
                rows.append(CertificationRow(
                    "communication-less ratio floor", st.name, None, est,
                    None, "OPEN",
                    "open regime (diagonal non-sink coupling, decoupled sinks): "
                    "computed ratio reported only"))
        g_c = st.design_graph(q)
        path = None
        for k in range(1, q + 1):
            for i in sorted(plant_graph.successors(k)):
                if i == k:
                    continue
                for j in sorted(plant_graph.successors(i)):
                    if j not in (i, k) and not g_c.has_edge(j, i):
                        path = (k, i, j)
                        break
                if path:
                    break
            if path:
                break
        if path is not None:
            fam_max = _family_max(report, "path")
            if fam_max is not None:
                ok = fam_max >= bound - cfg.bound_slack
                rows.append(CertificationRow(
                    "ignoring a downstream model on a path forces ratio >= 1 + 1/eps^2",
                    st.name, bound, fam_max, cfg.bound_slack, "PASS" if ok else "FAIL",
                    f"path {path[0]}->{path[1]}->{path[2]} with designer {path[1]} "
                    f"blind to subsystem {path[2]}"))
        pair = None
        part = cfg.ratio.partition or SubsystemPartition.scalars(q)
        for (i, j) in sorted(plant_graph.edges):
            if i != j and part.dims[i - 1] >= 2 and not g_c.has_edge(j, i):
                pair = (i, j)
                break
        if pair is not None:
            rows.append(CertificationRow(
                "multi-state subsystem influencing an unseen neighbor forces ratio >= 1 + 1/eps^2",
                st.name, bound, None, None, "INFO",
                f"subsystem {pair[0]} (dim >= 2) influences {pair[1]} unseen by its designer; "
                "asserted by theory, no numeric family implemented"))
        if len(rows) == rows_before:
            rows.append(CertificationRow(
                "estimated worst-case ratio", st.name, None, est, None, "INFO",
                report.limit_note or "no sharper statement applies to this strategy here"))
    sweep.sort(key=lambda p: (p.family, p.param_r if p.param_r is not None else -1.0,
                              p.param_s if p.param_s is not None else -1.0))
    return CertificationResult(rows=tuple(rows), sweep=tuple(sweep))


# ---------------------------------------------------------------------------
# CSV emission

def format_float(x):
    """17 significant digits; round-trips float64 exactly."""
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".17g")


def write_sweep_csv(points, path):
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["family", "param_r", "param_s", "epsilon",
                    "cost_strategy", "cost_optimal", "ratio"])
        for p in points:
            w.writerow([p.family, format_float(p.param_r), format_float(p.param_s),
                        format_float(p.epsilon), format_float(p.cost_strategy),
                        format_float(p.cost_optimal), format_float(p.ratio)])


def write_certification_csv(rows, path):
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "strategy", "expected", "computed", "tolerance", "status", "note"])
        for r in rows:
            w.writerow([r.name, r.strategy, format_float(r.expected),
                        format_float(r.computed), format_float(r.tolerance),
                        r.status, r.note])
