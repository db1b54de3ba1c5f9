#!/usr/bin/env python3
"""Design for a sink that has more states than inputs.

A scalar feeder drives a two-state sink with a single input.  Full
cancellation is impossible there, so synthesis is gated by a matching
condition: every unstable local mode must be controllable and every
incoming coupling must lie in the span of the sink's input matrix.  When
it holds, the sink runs its local design and the realized cost equals
the local prediction.
"""

import numpy as np

from declqr import (
    DirectedGraph,
    Plant,
    SubsystemPartition,
    check_matching_condition,
    closed_loop_cost,
    solve_dare,
    spectral_radius,
    underactuated_sink_aware,
)

part = SubsystemPartition([1, 2], input_dims=[1, 1])
graph = DirectedGraph(2, [(1, 2), (2, 2)])
plant = Plant(
    part,
    A=np.array([[0.0, 0.0, 0.0], [1.0, 0.5, 0.0], [0.0, 0.0, 0.0]]),
    B=np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
    x0=np.array([1.0, 0.5, -0.5]),
    epsilon=1.0,
)

failures = check_matching_condition(plant, graph)
print("matching condition failures:", failures or "none")

gain = underactuated_sink_aware(plant, graph)
f = plant.A + plant.B @ gain.K
print("gain K =")
print(gain.K)
print(f"closed-loop spectral radius: {spectral_radius(f):.6f}")

# the sink's own value matrix predicts the realized cost
x22 = solve_dare(part.block(plant.A, 2, 2), part.input_block(plant.B, 2)).X
b22 = part.input_block(plant.B, 2)
z = part.row_block(plant.A, 2) @ plant.x0
predicted = float(z @ np.linalg.solve(np.linalg.inv(x22) + b22 @ b22.T, z))
realized = closed_loop_cost(plant, gain).value
print(f"local prediction {predicted:.12f} vs realized {realized:.12f}")
print()

# flip one coupling entry out of span(B_22) and the same design is refused
bad = Plant(part,
            A=np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]),
            B=plant.B, x0=plant.x0, epsilon=1.0)
print("coupling outside the input span is rejected:")
for failure in check_matching_condition(bad, graph):
    print(" ", failure)
