"""Command line front end.

One invocation runs one scenario file and writes its artifacts into the
output directory: report.csv, report.txt and, for sweep-producing tasks,
sweep.csv.  Exit status is 0 when every check passes, 1 when a checked
guarantee fails, 2 on input errors.  Outputs depend only on the scenario
content, the seed and the tolerance, never on --jobs.
"""

import argparse
import csv
import os
import sys

import numpy as np

from .analysis import (
    FAMILY_KINDS,
    CertificationConfig,
    DominationConfig,
    MotifNotFoundError,
    RatioConfig,
    _ratio_value,
    certification_suite,
    closed_loop_cost,
    competitive_ratio_estimate,
    domination_compare,
    format_float,
    optimal_cost,
    truncated_cost_oracle,
    write_certification_csv,
    write_sweep_csv,
)
from .plants import random_plant
from .scenarios import Scenario, ScenarioError, generate_example_scenarios, load_scenario
from .solvers import spectral_radius
from .strategies import MatchingConditionError

_ENV_PREFIX = "DECLQR_"


def _fmt(x):
    """Human-facing float text; shortest round-trip form."""
    if x is None:
        return "-"
    return repr(float(x))


def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format_float(x)
    return x


def _write_report_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(x) for x in row])


def _ratio_config(sc, seed, jobs):
    mapped = {}
    allowed = {"min_param", "max_param", "points_per_decade", "pair_points_per_decade",
               "random_trials", "random_magnitude", "x0_random", "families",
               "gain_match_tol"}
    for key, value in sc.sweep.items():
        if key not in allowed:
            raise ScenarioError(f"sweep.{key}", "unknown sweep option")
        mapped[key] = value
    if "families" in mapped:
        fams = tuple(mapped["families"])
        for fam in fams:
            if fam not in FAMILY_KINDS:
                raise ScenarioError("sweep.families",
                                    f"unknown family {fam!r}; choose from {FAMILY_KINDS}")
        mapped["families"] = fams
    return RatioConfig(partition=sc.partition, seed=seed, jobs=jobs, **mapped)


def _ensemble_value(sc, key, default):
    value = sc.ensemble.get(key, default)
    unknown = set(sc.ensemble) - {"plants", "magnitude", "x0_random"}
    if unknown:
        raise ScenarioError(f"ensemble.{sorted(unknown)[0]}", "unknown ensemble option")
    return value


def _task_synthesize(sc, seed, jobs, tol):
    rows, text = [], []
    for strategy in sc.strategies:
        gain = strategy.synthesize(sc.plant, sc.plant_graph)
        k = gain.K
        for r in range(k.shape[0]):
            for c in range(k.shape[1]):
                rows.append([strategy.name, r + 1, c + 1, float(k[r, c])])
        f = sc.plant.A + sc.plant.B @ k
        rho = spectral_radius(f)
        bad = gain.sparsity_violations(tol=1e-12)
        cost = closed_loop_cost(sc.plant, gain)
        text.append(f"{strategy.name}: spectral radius {_fmt(rho)}, "
                    f"cost {_fmt(cost.value)}, "
                    + ("sparsity respected" if not bad
                       else f"sparsity violated in blocks {bad}"))
    return 0, ["strategy", "row", "col", "value"], rows, text, None, None


def _task_cost(sc, seed, jobs, tol):
    opt = optimal_cost(sc.plant)
    rows, text = [], []
    for strategy in sc.strategies:
        gain = strategy.synthesize(sc.plant, sc.plant_graph)
        rep = closed_loop_cost(sc.plant, gain)
        rho = spectral_radius(sc.plant.A + sc.plant.B @ gain.K)
        ratio = _ratio_value(rep.value, opt.value)
        rows.append([strategy.name, rep.value, opt.value, ratio,
                     rep.stable, rep.method, rho])
        text.append(f"{strategy.name}: cost {_fmt(rep.value)} "
                    f"(optimal {_fmt(opt.value)}, ratio {_fmt(ratio)}, "
                    f"{'stable' if rep.stable else 'unstable'}, {rep.method})")
    header = ["strategy", "cost", "optimal_cost", "ratio", "stable",
              "method", "spectral_radius"]
    return 0, header, rows, text, None, None


def _task_ratio(sc, seed, jobs, tol):
    rows, text, sweep = [], [], []
    for strategy in sc.strategies:
        cfg = _ratio_config(sc, seed, jobs)
        rep = competitive_ratio_estimate(strategy, sc.plant_graph, sc.control_graph,
                                         epsilon=sc.epsilon, config=cfg)
        rows.append([strategy.name, rep.estimated_ratio, rep.family, rep.limit_note])
        sweep.extend(rep.sweep)
        text.append(f"{strategy.name}: estimated competitive ratio "
                    f"{_fmt(rep.estimated_ratio)} (worst family {rep.family})"
                    + (f"; {rep.limit_note}" if rep.limit_note else ""))
    header = ["strategy", "estimated_ratio", "worst_family", "limit_note"]
    return 0, header, rows, text, sweep, None


def _task_dominate(sc, seed, jobs, tol):
    plants = _ensemble_value(sc, "plants", 64)
    cfg = DominationConfig(partition=sc.partition, plants=plants,
                           magnitude=sc.ensemble.get("magnitude", 1.0),
                           x0_random=sc.ensemble.get("x0_random", 8),
                           seed=seed, jobs=jobs)
    first, second = sc.strategies
    rep = domination_compare(first, second, sc.plant_graph,
                             epsilon=sc.epsilon, config=cfg)
    wit = rep.strict_witness
    rows = [[first.name, second.name, rep.verdict, rep.max_violation, rep.samples,
             wit.cost_first if wit else None, wit.cost_second if wit else None]]
    text = [f"{first.name} vs {second.name}: {rep.verdict} over {rep.samples} "
            f"sampled cost comparisons (max violation {_fmt(rep.max_violation)})"]
    if wit is not None:
        text.append(f"strict improvement witness: {_fmt(wit.cost_first)} vs "
                    f"{_fmt(wit.cost_second)}")
    header = ["first", "second", "verdict", "max_violation", "samples",
              "witness_cost_first", "witness_cost_second"]
    return 0, header, rows, text, None, None


def _task_theorems(sc, seed, jobs, tol):
    cfg = CertificationConfig(ratio=_ratio_config(sc, seed, jobs), eq_tol=tol)
    result = certification_suite(sc.plant_graph, sc.control_graph, sc.epsilon,
                                 strategies=sc.strategies, config=cfg)
    text = []
    for row in result.rows:
        head = f"{row.name} [{row.strategy}]: "
        if row.expected is not None:
            head += f"expected {_fmt(row.expected)}, got {_fmt(row.computed)}, {row.status}"
        else:
            head += f"got {_fmt(row.computed)}, {row.status}"
        if row.note:
            head += f" ({row.note})"
        text.append(head)
    failing = [row for row in result.rows if row.status == "FAIL"]
    if failing:
        text.append("failed checks:")
        for row in failing:
            text.append(f"  {row.name} [{row.strategy}]: expected {_fmt(row.expected)}, "
                        f"got {_fmt(row.computed)}")
    return (1 if failing else 0), None, None, text, list(result.sweep), result.rows


def _task_oracle_check(sc, seed, jobs, tol):
    plants = _ensemble_value(sc, "plants", 24)
    magnitude = sc.ensemble.get("magnitude", 1.0)
    rows, text = [], []
    failing = 0
    for t in range(plants):
        rng = np.random.default_rng([seed, 5, t])
        plant = random_plant(sc.plant_graph, sc.partition, epsilon=sc.epsilon,
                             magnitude=magnitude, rng=rng)
        for strategy in sc.strategies:
            gain = strategy.synthesize(plant, sc.plant_graph)
            rep = closed_loop_cost(plant, gain)
            rho = spectral_radius(plant.A + plant.B @ gain.K)
            # Truncation only certifies well-damped loops; hot loops stay INFO.
            if rho <= 0.9 and np.isfinite(rep.value):
                trunc = truncated_cost_oracle(plant, gain)
                rel = abs(rep.value - trunc) / max(1.0, abs(rep.value))
                status = "PASS" if rel <= tol else "FAIL"
            else:
                trunc, rel, status = None, None, "INFO"
            rows.append([t + 1, strategy.name, rho, rep.value, trunc, rel, status])
            if status == "FAIL":
                failing += 1
                text.append(f"plant {t + 1}, {strategy.name}: solver cost "
                            f"{_fmt(rep.value)} vs rollout {_fmt(trunc)} "
                            f"(rel err {_fmt(rel)} > {_fmt(tol)})")
    checked = sum(1 for r in rows if r[6] != "INFO")
    text.insert(0, f"{checked} of {len(rows)} cost computations checked against "
                   f"truncated rollouts at tolerance {_fmt(tol)}; "
                   f"{failing} disagreement(s)")
    header = ["plant", "strategy", "spectral_radius", "cost_lyapunov",
              "cost_truncated", "rel_err", "status"]
    return (1 if failing else 0), header, rows, text, None, None


_TASKS = {
    "synthesize": _task_synthesize,
    "cost": _task_cost,
    "ratio": _task_ratio,
    "dominate": _task_dominate,
    "theorems": _task_theorems,
    "oracle-check": _task_oracle_check,
}


def run(scenario_path, out_dir=None, seed=None, jobs=None, tolerance=None):
    """Execute one scenario file; returns the process exit code.

    Artifacts are only written after the whole computation succeeds, so a
    failed validation never leaves a partial CSV behind.
    """
    try:
        sc = load_scenario(scenario_path)
    except ScenarioError as exc:
        print(f"scenario error in {scenario_path}: {exc}", file=sys.stderr)
        return 2
    seed = sc.seed if seed is None else seed
    tol = sc.tolerance if tolerance is None else tolerance
    jobs = 1 if jobs is None else max(1, jobs)
    out = sc.output if out_dir is None else out_dir
    try:
        code, header, rows, text, sweep, cert_rows = _TASKS[sc.task](sc, seed, jobs, tol)
    except ScenarioError as exc:
        print(f"scenario error in {scenario_path}: {exc}", file=sys.stderr)
        return 2
    except MotifNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except MatchingConditionError as exc:
        print(f"input error: strategy not applicable: {exc}", file=sys.stderr)
        return 2

    os.makedirs(out, exist_ok=True)
    if cert_rows is not None:
        write_certification_csv(cert_rows, os.path.join(out, "report.csv"))
    else:
        _write_report_csv(os.path.join(out, "report.csv"), header, rows)
    if sweep is not None:
        write_sweep_csv(sweep, os.path.join(out, "sweep.csv"))
    with open(os.path.join(out, "report.txt"), "w", newline="\n") as fh:
        fh.write(f"task: {sc.task}\n")
        fh.write(f"scenario: {os.path.basename(scenario_path)}\n")
        fh.write(f"seed: {seed}\n")
        for line in text:
            fh.write(line + "\n")
    for line in text:
        print(line)
    print(f"wrote {os.path.join(out, 'report.csv')}")
    return code


def _env_int(name):
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ScenarioError(_ENV_PREFIX + name, f"not an integer: {raw!r}") from None


def _env_float(name):
    raw = os.environ.get(_ENV_PREFIX + name)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ScenarioError(_ENV_PREFIX + name, f"not a number: {raw!r}") from None


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="declqr",
        description="Run a scenario file: synthesize gains, price closed loops, "
                    "estimate competitive ratios, certify guarantees.")
    parser.add_argument("--scenario", help="path to a scenario JSON file")
    parser.add_argument("--out", help="output directory (default from the scenario)")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--jobs", type=int, help="worker threads (default 1)")
    parser.add_argument("--tolerance", type=float,
                        help="override the scenario check tolerance")
    parser.add_argument("--emit-examples", metavar="DIR",
                        help="write ready-to-run example scenarios into DIR and exit")
    args = parser.parse_args(argv)

    try:
        scenario = args.scenario or os.environ.get(_ENV_PREFIX + "SCENARIO")
        out = args.out or os.environ.get(_ENV_PREFIX + "OUT")
        seed = args.seed if args.seed is not None else _env_int("SEED")
        jobs = args.jobs if args.jobs is not None else _env_int("JOBS")
        tolerance = (args.tolerance if args.tolerance is not None
                     else _env_float("TOLERANCE"))
    except ScenarioError as exc:
        print(f"environment error: {exc}", file=sys.stderr)
        return 2
    if seed is not None and not 0 <= seed < 2 ** 64:
        print("seed must fit in an unsigned 64-bit integer", file=sys.stderr)
        return 2

    if args.emit_examples:
        paths = generate_example_scenarios(args.emit_examples)
        for path in paths:
            load_scenario(path)
            print(path)
        return 0
    if not scenario:
        parser.error("--scenario is required (or set DECLQR_SCENARIO)")
    return run(scenario, out_dir=out, seed=seed, jobs=jobs, tolerance=tolerance)


if __name__ == "__main__":
    sys.exit(main())
