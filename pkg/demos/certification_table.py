#!/usr/bin/env python3
"""Certify worst-case guarantees numerically, one table row per claim.

Each row states an expected worst-case ratio for a strategy on a graph,
recomputes it from sweeps, and reports PASS/FAIL; bounds that are only
approached in a parameter limit carry a looser tolerance and a note, and
regimes without a sharp statement come back as OPEN or INFO rows.
"""

from declqr import DirectedGraph, certification_suite


def show(title, graph):
    print(title)
    result = certification_suite(graph)
    for row in result.rows:
        expected = "-" if row.expected is None else f"{row.expected:g}"
        computed = "-" if row.computed is None else f"{row.computed:.9f}"
        print(f"  [{row.status:4s}] {row.name} ({row.strategy}): "
              f"expected {expected}, computed {computed}")
        if row.note:
            print(f"         {row.note}")
    print()


show("star interconnection (no sinks):",
     DirectedGraph(3, [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]))

show("fed sink with a self-loop (supremum only approached):",
     DirectedGraph(2, [(1, 2), (2, 2)]))

show("silent feeder into a decoupled sink (sink-aware design is optimal):",
     DirectedGraph(2, [(1, 2)]))

show("self-loop feeder into a decoupled sink (open regime):",
     DirectedGraph(2, [(1, 1), (1, 2)]))
