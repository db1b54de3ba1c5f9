#!/usr/bin/env python3
"""Drive the command line front end from Python.

Every capability is also reachable as `declqr --scenario file.json`;
this script emits the ready-made scenario files, runs three of them,
and prints the artifacts they leave behind.
"""

import pathlib
import tempfile

from declqr import generate_example_scenarios, run

workdir = pathlib.Path(tempfile.mkdtemp(prefix="declqr-demo-"))
scenario_dir = workdir / "scenarios"
paths = {pathlib.Path(p).name: p for p in generate_example_scenarios(scenario_dir)}

print("emitted scenario files:")
for name in sorted(paths):
    print("  ", name)
print()

for name in ("star_cost.json", "star_theorems.json", "oracle_check.json"):
    out = workdir / name.replace(".json", "")
    print(f"$ declqr --scenario {name} --out {out.name}")
    code = run(paths[name], out_dir=str(out))
    print(f"(exit status {code})")
    print("artifacts:", sorted(p.name for p in out.iterdir()))
    print()

print(f"everything under {workdir}")
