"""Design strategies: pure maps from plant matrices to static gains.

A strategy's design graph says which subsystem models each local
designer may read: edge (j, i) means designer i sees row-block [A]_j and
input block B_jj.  The built-in strategies are communication-less, so
their design graphs carry self-loops only.  Synthesis never reads x0.
"""

import json
from dataclasses import dataclass

import numpy as np

from .graphs import DirectedGraph, adjacency, sinks
from .plants import block_pattern_graph, random_plant
from .solvers import solve_dare


class MatchingConditionError(ValueError):
    """An under-actuated sink fails the conditions needed for synthesis."""

    def __init__(self, failures):
        super().__init__("; ".join(failures))
        self.failures = tuple(failures)


@dataclass(frozen=True)
class Gain:
    """Static feedback u = K x with the control graph it claims to respect."""

    K: np.ndarray
    partition: object
    sparsity: DirectedGraph

    def sparsity_violations(self, tol=0.0):
        part = self.partition
        s = adjacency(self.sparsity)
        out = []
        for i in range(1, part.q + 1):
            for j in range(1, part.q + 1):
                if s[i - 1, j - 1]:
                    continue
                blk = self.K[part.input_slice(i), part.state_slice(j)]
                dev = float(np.abs(blk).max(initial=0.0))
                if dev > tol:
                    out.append(f"gain block ({i},{j}) has magnitude {dev:.3e} "
                               f"but the control graph has no edge {j}->{i}")
        return out


@dataclass(frozen=True)
class Strategy:
    """Named synthesis rule together with its design graph."""

    name: str
    design: object
    synth: object

    def design_graph(self, q):
        return self.design(q)

    def synthesize(self, plant, plant_graph):
        return self.synth(plant, plant_graph)


def _square_inverse_blocks(plant, subsystems, role):
    part = plant.partition
    for i in subsystems:
        if part.input_dims[i - 1] != part.dims[i - 1]:
            raise MatchingConditionError(
                [f"{role} subsystem {i} needs a square input block, got "
                 f"{part.dims[i - 1]}x{part.input_dims[i - 1]}"])


def deadbeat(plant, plant_graph=None):
    """Gain -B^{-1} A; the closed loop reaches the origin in one step."""
    part = plant.partition
    _square_inverse_blocks(plant, range(1, part.q + 1), "deadbeat on")
    k = -np.linalg.solve(plant.B, plant.A)
    sparsity = plant_graph if plant_graph is not None else block_pattern_graph(k, part)
    return Gain(K=k, partition=part, sparsity=sparsity)


def _local_dare_row(plant, i):
    """Row-block -(I + B^T X B)^{-1} B^T X [A]_i from the subsystem-local DARE."""
    part = plant.partition
    a_ii = part.block(plant.A, i, i)
    b_ii = part.input_block(plant.B, i)
    sol = solve_dare(a_ii, b_ii)
    bx = b_ii.T @ sol.X
    w = np.linalg.solve(np.eye(b_ii.shape[1]) + bx @ b_ii, bx)
    return -w @ part.row_block(plant.A, i)


def check_matching_condition(plant, plant_graph):
    """Conditions letting an under-actuated sink run its local design.

    For each sink with fewer inputs than states: (A_ii, B_ii) must have
    no uncontrollable mode on or outside the unit circle, and every
    incoming coupling block must lie in the column span of B_ii.
    Returns a list of failure descriptions; empty means admissible.
    """
    part = plant.partition
    failures = []
    snk = sinks(plant_graph)
    for i in range(1, part.q + 1):
        ni, mi = part.dims[i - 1], part.input_dims[i - 1]
        if mi >= ni:
            continue
        if i not in snk:
            failures.append(f"subsystem {i} is under-actuated but not a sink")
            continue
        a_ii = part.block(plant.A, i, i)
        b_ii = part.input_block(plant.B, i)
        for lam in np.linalg.eigvals(a_ii):
            if abs(lam) >= 1.0 - 1e-9:
                pbh = np.hstack([lam * np.eye(ni) - a_ii, b_ii])
                if np.linalg.matrix_rank(pbh) < ni:
                    failures.append(
                        f"sink {i}: mode at |lambda|={abs(lam):.6g} is uncontrollable")
        rank_b = np.linalg.matrix_rank(b_ii)
        for j in plant_graph.predecessors(i):
            if j == i:
                continue
            a_ij = part.block(plant.A, i, j)
            if not a_ij.any():
                continue
            if np.linalg.matrix_rank(np.hstack([b_ii, a_ij])) > rank_b:
                failures.append(
                    f"sink {i}: coupling block from subsystem {j} leaves span(B_{i}{i})")
    return failures


def sink_aware(plant, plant_graph):
    """Deadbeat on every non-sink row, local DARE feedback on every sink row.

    Sinks receive the optimal local response to their own recursion
    while still cancelling what flows in from upstream as well as the
    local DARE weighting allows.  With no sinks this is exactly the
    deadbeat gain.  Under-actuated sinks are admitted only when the
    matching condition holds.
    """
    part = plant.partition
    snk = sinks(plant_graph)
    non = [i for i in range(1, part.q + 1) if i not in snk]
    _square_inverse_blocks(plant, non, "non-sink")
    failures = check_matching_condition(plant, plant_graph)
    if failures:
        raise MatchingConditionError(failures)
    k = np.zeros((part.m, part.n))
    for i in range(1, part.q + 1):
        if i in snk:
            k[part.input_slice(i), :] = _local_dare_row(plant, i)
        else:
            b_ii = part.input_block(plant.B, i)
            k[part.input_slice(i), :] = -np.linalg.solve(b_ii, part.row_block(plant.A, i))
    return Gain(K=k, partition=part, sparsity=plant_graph)


def underactuated_sink_aware(plant, plant_graph):
    """Sink-aware synthesis with the matching condition checked up front."""
    failures = check_matching_condition(plant, plant_graph)
    if failures:
        raise MatchingConditionError(failures)
    return sink_aware(plant, plant_graph)


def centralized_lqr(plant, plant_graph=None):
    """Globally optimal gain from the full-model DARE; dense in general."""
    sol = solve_dare(plant.A, plant.B)
    bx = plant.B.T @ sol.X
    k = -np.linalg.solve(np.eye(plant.m) + bx @ plant.B, bx @ plant.A)
    return Gain(K=k, partition=plant.partition,
                sparsity=DirectedGraph.complete(plant.q))


ROW_KINDS = ("deadbeat", "local_dare", "zero")


def composed(rows, name=None):
    """Strategy assembled row-block by row-block.

    `rows` maps subsystem index to "deadbeat", "local_dare", "zero", or
    a constant row-block array of shape (m_i, n); unlisted subsystems
    default to deadbeat.  Every choice is communication-less.
    """
    rows = {int(i): r for i, r in rows.items()}

    def synth(plant, plant_graph):
        part = plant.partition
        k = np.zeros((part.m, part.n))
        for i in range(1, part.q + 1):
            spec = rows.get(i, "deadbeat")
            if isinstance(spec, str):
                if spec == "deadbeat":
                    _square_inverse_blocks(plant, [i], "deadbeat row for")
                    b_ii = part.input_block(plant.B, i)
                    k[part.input_slice(i), :] = -np.linalg.solve(
                        b_ii, part.row_block(plant.A, i))
                elif spec == "local_dare":
                    k[part.input_slice(i), :] = _local_dare_row(plant, i)
                elif spec == "zero":
                    pass
                else:
                    raise ValueError(f"unknown row kind {spec!r}; expected one of "
                                     f"{ROW_KINDS} or a constant array")
            else:
                blk = np.asarray(spec, dtype=float)
                isl = part.input_slice(i)
                if blk.shape != (isl.stop - isl.start, part.n):
                    raise ValueError(f"constant row for subsystem {i} must be "
                                     f"{isl.stop - isl.start}x{part.n}, got {blk.shape}")
                k[isl, :] = blk
        return Gain(K=k, partition=part, sparsity=DirectedGraph.complete(part.q))

    if name is None:
        canon = {str(i): (r if isinstance(r, str) else np.asarray(r).tolist())
                 for i, r in sorted(rows.items())}
        name = "composed:" + json.dumps(canon, separators=(",", ":"))
    return Strategy(name=name, design=DirectedGraph.self_loops, synth=synth)


def deadbeat_strategy():
    return Strategy(name="deadbeat", design=DirectedGraph.self_loops,
                    synth=lambda p, g: deadbeat(p, g))


def sink_aware_strategy():
    return Strategy(name="sink_aware", design=DirectedGraph.self_loops,
                    synth=sink_aware)


def centralized_strategy():
    return Strategy(name="lqr", design=DirectedGraph.complete,
                    synth=lambda p, g: centralized_lqr(p, g))


def get_strategy(spec):
    """Resolve a scenario-file strategy spec to a Strategy.

    Accepts "deadbeat", "theta" (alias of "sink_aware"), "lqr", a
    "composed:{...}" string, or {"composed": {...}}.
    """
    if isinstance(spec, dict):
        if set(spec) == {"composed"}:
            return composed(spec["composed"])
        raise ValueError(f"unknown strategy spec {spec!r}")
    if spec == "deadbeat":
        return deadbeat_strategy()
    if spec in ("theta", "sink_aware"):
        return sink_aware_strategy()
    if spec in ("lqr", "centralized"):
        return centralized_strategy()
    if isinstance(spec, str) and spec.startswith("composed:"):
        return composed(json.loads(spec[len("composed:"):]))
    raise ValueError(f"unknown strategy spec {spec!r}")


@dataclass(frozen=True)
class ComplianceWitness:
    subsystem: int
    deviation: float
    plant: object
    altered_plant: object
    kind: str


@dataclass(frozen=True)
class ComplianceReport:
    ok: bool
    information_ok: bool
    sparsity_ok: bool
    trials: int
    witness: ComplianceWitness = None


def compliance_check(strategy, plant_graph, partition=None, trials=32, seed=0,
                     epsilon=1.0, magnitude=1.0, tol=0.0, design_graph=None):
    """Probe whether synthesized gains use only what the design graph allows.

    For each subsystem i and each trial, two random plants are drawn
    that agree bit-for-bit on every row-block visible to designer i and
    differ elsewhere; row-block i of the two gains must then agree to
    within tol.  Declared gain sparsity is checked on the way.  Reports
    the first counterexample found; the check is probabilistic, so a
    pass is evidence, not proof.

    design_graph defaults to the strategy's own declared graph; pass one
    explicitly to test compliance with a stricter information pattern.
    """
    g_c = design_graph if design_graph is not None else strategy.design_graph(plant_graph.q)
    first = None
    info_ok = True
    sparsity_ok = True
    ran = 0
    for t in range(trials):
        base = random_plant(plant_graph, partition, epsilon, magnitude,
                            rng=np.random.default_rng([seed, t, 0]))
        alt_source = random_plant(plant_graph, partition, epsilon, magnitude,
                                  rng=np.random.default_rng([seed, t, 1]))
        gain = strategy.synthesize(base, plant_graph)
        bad = gain.sparsity_violations(tol=1e-12)
        if bad and sparsity_ok:
            sparsity_ok = False
            if first is None:
                first = ComplianceWitness(subsystem=0, deviation=0.0, plant=base,
                                          altered_plant=base, kind=bad[0])
        part = base.partition
        for i in range(1, part.q + 1):
            hidden = [j for j in range(1, part.q + 1)
                      if not g_c.has_edge(j, i)]
            if not hidden:
                continue
            a2 = np.array(base.A)
            b2 = np.array(base.B)
            for j in hidden:
                a2[part.state_slice(j), :] = part.row_block(alt_source.A, j)
                b2[part.state_slice(j), part.input_slice(j)] = \
                    part.input_block(alt_source.B, j)
            altered = type(base)(part, a2, b2, base.x0, base.epsilon)
            gain2 = strategy.synthesize(altered, plant_graph)
            ran += 1
            dev = float(np.abs(gain.K[part.input_slice(i), :]
                               - gain2.K[part.input_slice(i), :]).max(initial=0.0))
            if dev > tol and info_ok:
                info_ok = False
                if first is None or first.subsystem == 0:
                    first = ComplianceWitness(subsystem=i, deviation=dev, plant=base,
                                              altered_plant=altered,
                                              kind="row-block depends on hidden model data")
        if not info_ok:
            break
    return ComplianceReport(ok=info_ok and sparsity_ok, information_ok=info_ok,
                            sparsity_ok=sparsity_ok, trials=ran, witness=first)


@dataclass(frozen=True)
class NecessaryConditionsReport:
    zero_pattern_ok: bool
    decoupling_ok: bool
    zero_pattern_violations: tuple
    decoupling_violations: tuple
    columns_checked: int
    blocks_checked: int


def necessary_conditions_probe(strategy, plant_graph, partition=None, trials=16,
                               seed=0, epsilon=1.0, magnitude=1.0, tol=1e-9):
    """Check two structural marks every finite-ratio design must carry.

    (a) a state column that touches nothing in row-block i of A must
    also vanish in row-block i of the gain, and (b) on non-sink rows the
    gain must cancel incoming coupling exactly: A_ij + B_ii K_ij = 0 for
    j != i.  Both are probed on random admissible plants.
    """
    zp_bad = []
    dc_bad = []
    cols = 0
    blocks = 0
    snk = sinks(plant_graph)
    for t in range(trials):
        p = random_plant(plant_graph, partition, epsilon, magnitude,
                         rng=np.random.default_rng([seed, t]))
        part = p.partition
        gain = strategy.synthesize(p, plant_graph)
        scale = max(1.0, float(np.abs(gain.K).max(initial=0.0)))
        for i in range(1, part.q + 1):
            rows_a = part.row_block(p.A, i)
            rows_k = gain.K[part.input_slice(i), :]
            for c in range(part.n):
                if not rows_a[:, c].any():
                    cols += 1
                    dev = float(np.abs(rows_k[:, c]).max(initial=0.0))
                    if dev > tol * scale:
                        zp_bad.append((t, i, c + 1, dev))
        for i in range(1, part.q + 1):
            if i in snk:
                continue
            b_ii = part.input_block(p.B, i)
            for j in plant_graph.predecessors(i):
                if j == i:
                    continue
                blocks += 1
                a_ij = part.block(p.A, i, j)
                k_ij = gain.K[part.input_slice(i), part.state_slice(j)]
                dev = float(np.abs(a_ij + b_ii @ k_ij).max(initial=0.0))
                if dev > tol * max(1.0, float(np.abs(a_ij).max(initial=0.0))):
                    dc_bad.append((t, i, j, dev))
    return NecessaryConditionsReport(
        zero_pattern_ok=not zp_bad, decoupling_ok=not dc_bad,
        zero_pattern_violations=tuple(zp_bad[:5]), decoupling_violations=tuple(dc_bad[:5]),
        columns_checked=cols, blocks_checked=blocks)
