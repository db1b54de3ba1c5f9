#!/usr/bin/env python3
"""Audit what information a synthesis rule actually uses.

The compliance probe feeds a strategy pairs of plants that agree on
everything its design graph lets each local designer see, and differ
elsewhere; a compliant design must produce identical row-blocks.  The
structural probe checks two marks every finite-ratio design carries:
zero columns of a row-block stay zero in the gain, and non-sink rows
cancel incoming coupling exactly.
"""

from declqr import DirectedGraph, compliance_check, get_strategy, necessary_conditions_probe
from declqr.strategies import composed

star = DirectedGraph(3, [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
local_only = DirectedGraph.self_loops(3)

print("compliance against a self-loop-only design graph (32 trials each):")
for spec in ("deadbeat", "theta", "lqr"):
    rep = compliance_check(get_strategy(spec), star, trials=32,
                           design_graph=local_only)
    line = f"  {spec:8s} ok={rep.ok}"
    if rep.witness is not None:
        line += (f"  witness: subsystem {rep.witness.subsystem}, "
                 f"deviation {rep.witness.deviation:.3e}")
    print(line)
print()

chain = DirectedGraph(3, [(1, 2), (2, 3)])
print("structural probe on a chain, deadbeat vs a design that zeroes row 2:")
for name, strategy in (("deadbeat", get_strategy("deadbeat")),
                       ("zero-row-2", composed({2: "zero"}))):
    rep = necessary_conditions_probe(strategy, chain, trials=8)
    print(f"  {name:10s} zero-pattern ok={rep.zero_pattern_ok} "
          f"decoupling ok={rep.decoupling_ok}")
    for (trial, i, j, dev) in rep.decoupling_violations:
        print(f"    trial {trial}: row {i} leaves A_{i}{j} uncancelled "
              f"(deviation {dev:.3f})")
