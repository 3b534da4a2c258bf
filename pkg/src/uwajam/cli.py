"""Batch front end: analyze / simulate / sweep / validate.

CSV rows follow the fixed schema
``scenario,engine,axis,axis_value,metric,value,stderr,ci_lo,ci_hi,note``
in deterministic (scenario, engine, axis value, metric) order; floats are
written with repr (shortest round-trip, locale-independent).  JSON-lines
output mirrors the same field names.  Identical seeds give byte-identical
output regardless of ``UWAJAM_THREADS``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import _pykernels, analysis, montecarlo
from .config import (SweepSpec, apply_axis, dump_config, load_config,
                     load_sweep)
from .montecarlo import TrialPlan, worker_count
from .numerics.streams import RandomStream

CSV_HEADER = "scenario,engine,axis,axis_value,metric,value,stderr,ci_lo,ci_hi,note"

METRICS = ("coverage", "avg_rate_se", "avg_rate_bps", "ee")


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


@dataclass
class ResultRow:
    scenario: str
    engine: str
    axis: str | None
    axis_value: float | None
    metric: str
    value: float
    stderr: float
    ci_lo: float
    ci_hi: float
    note: str = ""

    def csv(self) -> str:
        note = self.note.replace(",", ";").replace("\n", " ")
        return ",".join([
            self.scenario, self.engine, self.axis or "", _fmt(self.axis_value),
            self.metric, _fmt(self.value), _fmt(self.stderr),
            _fmt(self.ci_lo), _fmt(self.ci_hi), note,
        ])

    def json(self) -> str:
        return json.dumps({
            "scenario": self.scenario, "engine": self.engine,
            "axis": self.axis, "axis_value": self.axis_value,
            "metric": self.metric, "value": self.value,
            "stderr": self.stderr, "ci_lo": self.ci_lo, "ci_hi": self.ci_hi,
            "note": self.note,
        })


def _analytic_rows(name, scenario, axis=None, axis_value=None):
    cov = analysis.coverage(scenario)
    rate_se = analysis.average_rate(scenario)
    rate_bps = rate_se * scenario.env.bandwidth_hz
    ee = rate_bps / (scenario.link.static_power + scenario.link.tx_power)
    values = {"coverage": cov, "avg_rate_se": rate_se,
              "avg_rate_bps": rate_bps, "ee": ee}
    return [ResultRow(name, "analytic", axis, axis_value, metric, v,
                      0.0, v, v) for metric, v in values.items()]


def _montecarlo_rows(name, scenario, n_trials, seed, axis=None, axis_value=None):
    plan = TrialPlan(n_trials=n_trials, seed=seed, scenario=scenario)
    cov = montecarlo.estimate_coverage(plan)
    rate = montecarlo.estimate_rate(plan)
    ee = montecarlo.estimate_ee(plan)
    bw = scenario.env.bandwidth_hz
    rows = [
        ResultRow(name, "montecarlo", axis, axis_value, "coverage",
                  cov.value, cov.stderr, *cov.ci95),
        ResultRow(name, "montecarlo", axis, axis_value, "avg_rate_se",
                  rate.value, rate.stderr, *rate.ci95),
        ResultRow(name, "montecarlo", axis, axis_value, "avg_rate_bps",
                  rate.value * bw, rate.stderr * bw,
                  rate.ci95[0] * bw, rate.ci95[1] * bw),
        ResultRow(name, "montecarlo", axis, axis_value, "ee",
                  ee.value, ee.stderr, *ee.ci95),
    ]
    return rows


def _semianalytic_rows(name, scenario, n_fields, seed, axis=None,
                       axis_value=None):
    est = analysis.semianalytic_coverage(scenario, max(n_fields, 1000),
                                         RandomStream(seed))
    return [ResultRow(name, "semianalytic", axis, axis_value, "coverage",
                      est.value, est.stderr, *est.ci95)]


def _failure_rows(name, engine, axis, axis_value, exc):
    nan = math.nan
    note = f"{type(exc).__name__}: {exc}"[:200]
    metrics = ("coverage",) if engine == "semianalytic" else METRICS
    return [ResultRow(name, engine, axis, axis_value, metric,
                      nan, nan, nan, nan, note) for metric in metrics]


def run_sweep(spec: SweepSpec, out_path) -> int:
    """Evaluate every sweep cell and write the CSV; returns failure count."""
    cells = []
    index = 0
    for name, scenario in spec.scenarios:
        for engine in spec.engines:
            for value in spec.values:
                cells.append((index, name, scenario, engine, value))
                index += 1

    def eval_cell(cell):
        index, name, scenario, engine, value = cell
        cell_seed = _pykernels.child_stream_id(spec.seed, index)
        swept = apply_axis(scenario, spec.axis, value)
        try:
            if engine == "analytic":
                return _analytic_rows(name, swept, spec.axis, value)
            if engine == "montecarlo":
                return _montecarlo_rows(name, swept, spec.n_trials, cell_seed,
                                        spec.axis, value)
            return _semianalytic_rows(name, swept, spec.n_trials, cell_seed,
                                      spec.axis, value)
        except Exception as exc:  # recorded per cell, sweep keeps going
            return _failure_rows(name, engine, spec.axis, value, exc)

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(eval_cell, cells))
    else:
        results = [eval_cell(cell) for cell in cells]

    failures = 0
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for rows in results:
            for row in rows:
                if row.note:
                    failures += 1
                fh.write(row.csv() + "\n")
    return failures


@dataclass
class ValidationRow:
    metric: str
    engine: str
    analytic: float
    estimate: float
    stderr: float
    ratio: float


@dataclass
class ValidationReport:
    rows: list[ValidationRow]
    threshold: float = 4.0

    @property
    def ok(self) -> bool:
        return all(r.ratio <= self.threshold for r in self.rows)


def validate(scenario, n_trials: int, seed: int,
             analytic_scenario=None) -> ValidationReport:
    """Compare analytic metrics against the sampling engines.

    ``analytic_scenario`` lets the harness check its own sensitivity by
    feeding the analytic engine a deliberately corrupted configuration.
    """
    if n_trials < 10_000:
        raise ValueError(f"validate needs n_trials >= 10000, got {n_trials}")
    a_scn = analytic_scenario if analytic_scenario is not None else scenario
    plan = TrialPlan(n_trials=n_trials, seed=seed, scenario=scenario)
    bw = scenario.env.bandwidth_hz

    a_cov = analysis.coverage(a_scn)
    a_rate = analysis.average_rate(a_scn)
    a_ee = bw * a_rate / (a_scn.link.static_power + a_scn.link.tx_power)

    mc_cov = montecarlo.estimate_coverage(plan)
    mc_rate = montecarlo.estimate_rate(plan)
    mc_ee = montecarlo.estimate_ee(plan)
    semi = analysis.semianalytic_coverage(scenario, max(n_trials // 10, 1000),
                                          RandomStream(seed).split(1))

    def ratio(a, est):
        diff = abs(a - est.value)
        if diff < 1e-9:
            return 0.0
        return diff / max(est.stderr, 1e-12)

    rows = [
        ValidationRow("coverage", "montecarlo", a_cov, mc_cov.value,
                      mc_cov.stderr, ratio(a_cov, mc_cov)),
        ValidationRow("avg_rate_se", "montecarlo", a_rate, mc_rate.value,
                      mc_rate.stderr, ratio(a_rate, mc_rate)),
        ValidationRow("ee", "montecarlo", a_ee, mc_ee.value,
                      mc_ee.stderr, ratio(a_ee, mc_ee)),
        ValidationRow("coverage", "semianalytic", a_cov, semi.value,
                      semi.stderr, ratio(a_cov, semi)),
    ]
    return ValidationReport(rows=rows)


def _cmd_analyze(args) -> int:
    scenario = load_config(args.config, args.scenario)
    if args.dump_config:
        sys.stdout.write(dump_config(scenario))
        return 0
    name = args.scenario or "scenario"
    for row in _analytic_rows(name, scenario):
        print(row.json())
    return 0


def _cmd_simulate(args) -> int:
    scenario = load_config(args.config, args.scenario)
    name = args.scenario or "scenario"
    for row in _montecarlo_rows(name, scenario, args.trials, args.seed):
        print(row.json())
    return 0


def _cmd_sweep(args) -> int:
    spec = load_sweep(args.spec)
    failures = run_sweep(spec, args.out)
    if failures:
        print(f"sweep: {failures} cell(s) failed", file=sys.stderr)
        return 1
    return 0


def _cmd_validate(args) -> int:
    scenario = load_config(args.config, args.scenario)
    report = validate(scenario, args.trials, args.seed)
    print(f"{'metric':<14} {'engine':<13} {'analytic':>14} {'estimate':>14} "
          f"{'stderr':>12} {'|diff|/se':>10}")
    for r in report.rows:
        print(f"{r.metric:<14} {r.engine:<13} {r.analytic:>14.6g} "
              f"{r.estimate:>14.6g} {r.stderr:>12.3g} {r.ratio:>10.2f}")
    if not report.ok:
        print(f"FAIL: a metric exceeds {report.threshold} combined standard "
              "errors", file=sys.stderr)
        return 1
    print("OK: all metrics within 4 combined standard errors")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="uwajam",
        description="Underwater acoustic link metrics under Poisson jamming")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="one-shot analytic metrics (JSON lines)")
    p.add_argument("config")
    p.add_argument("--scenario", default=None)
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective configuration and exit")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo metrics (JSON lines)")
    p.add_argument("config")
    p.add_argument("--scenario", default=None)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="evaluate a sweep spec, write CSV")
    p.add_argument("spec")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate", help="analytic vs Monte Carlo agreement")
    p.add_argument("config")
    p.add_argument("--scenario", default=None)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=_cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
