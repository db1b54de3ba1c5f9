#!/usr/bin/env python3
"""Hunt the worst competitive ratio of the deadbeat design on a star graph.

The estimate sweeps every structured plant family the graph admits plus
random admissible plants, and maximizes cost(strategy)/cost(optimum) over
initial states.  For a communication-less design the worst case is
1 + 1/eps^2, attained by a single cross coupling of unit strength.
"""

from collections import defaultdict

from declqr import DirectedGraph, RatioConfig, competitive_ratio_estimate, get_strategy

graph = DirectedGraph(3, [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
deadbeat = get_strategy("deadbeat")

for eps in (0.5, 1.0, 2.0):
    rep = competitive_ratio_estimate(deadbeat, graph, epsilon=eps,
                                     config=RatioConfig(random_trials=16))
    floor = 1.0 + 1.0 / eps ** 2
    print(f"eps = {eps}: estimated ratio {rep.estimated_ratio:.9f} "
          f"(closed form {floor}), worst family {rep.family}")

print()
print("per-family grid maxima at eps = 1:")
rep = competitive_ratio_estimate(deadbeat, graph, config=RatioConfig(random_trials=16))
worst = defaultdict(float)
for point in rep.sweep:
    worst[point.family] = max(worst[point.family], point.ratio)
for family, ratio in sorted(worst.items()):
    print(f"  {family:20s} {ratio:.9f}")

print()
print("witness plant A:")
print(rep.witness_plant.A)
print("witness x0:", rep.witness_x0)
if rep.limit_note:
    print("note:", rep.limit_note)
