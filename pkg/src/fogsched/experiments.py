"""Parameter sweeps over load, delay, device count, and device capacity.

Every sweep produces a flat list of row dicts with a fixed column order
(one row per grid cell per algorithm), each carrying its full provenance
(scenario, seed, algorithm, axis, value).  Identical sweep specs produce
identical rows, and the writers format floats with repr, so output files
are byte-identical across repeated runs.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import engine, model, workload
from .schedulers import ensure_ltf_fast_node, run_algorithm

DEFAULT_SEED = 42
DEFAULT_ALGORITHMS = ("fifsa", "efsa", "ltf", "cdc-only")
JOB_LOAD_GRID = (1.5, 2.0, 2.5, 3.0, 3.5, 4.0)
DELAY_GRID_MS = (0.0, 5.0, 10.0, 15.0)
MIPS_GRID = (0.0, 300.0, 600.0, 900.0, 1200.0, 1500.0)
DEVICE_CASES = ("a", "b", "c", "d")
THROUGHPUT_COUNTS = (5, 10, 15, 20, 25)
THROUGHPUT_BUCKET_S = 0.1

AXES = ("job-load", "delay", "device-count", "mips")

TABLE_COLUMNS = {
    "job-load": ("scenario", "seed", "algorithm", "axis", "value",
                 "tct", "network_usage", "cost_total"),
    "delay": ("scenario", "seed", "algorithm", "axis", "value",
              "tct", "network_usage"),
    "device-count": ("scenario", "seed", "algorithm", "axis", "value", "tct"),
    "mips": ("scenario", "seed", "algorithm", "axis", "value", "tct"),
    "throughput": ("scenario", "seed", "algorithm", "jobs", "boundary",
                   "completed"),
}


@dataclass
class SweepSpec:
    """One sweep configuration; everything needed to reproduce its table."""

    scenario: object = "four-tier"  # preset name or ScenarioSpec
    algorithms: tuple = DEFAULT_ALGORITHMS
    axis: str = "job-load"
    grid: tuple = ()  # empty selects the axis default
    metrics: tuple = ("tct", "network_usage", "cost_total")
    seed: int = DEFAULT_SEED
    trace_path: object = None  # None selects the bundled trace
    synth: dict = None  # alternative to a trace: synth_jobs kwargs
    batch: bool = True
    base_multiplier: float = 1.5  # load held constant on non-load axes
    workers: int = 1

    def scenario_name(self) -> str:
        return self.scenario if isinstance(self.scenario, str) else "custom"

    def resolved_grid(self) -> tuple:
        if self.grid:
            return tuple(self.grid)
        return {
            "job-load": JOB_LOAD_GRID,
            "delay": DELAY_GRID_MS,
            "device-count": DEVICE_CASES,
            "mips": MIPS_GRID,
        }[self.axis]


def load_jobs(spec: SweepSpec) -> list:
    """Jobs for a sweep: from its trace (bundled by default) or synthesized."""
    if spec.synth is not None:
        return workload.synth_jobs(**spec.synth)
    path = spec.trace_path or workload.bundled_trace_path()
    records = workload.parse_trace(path).records
    return workload.jobs_from_trace(records, batch=spec.batch)


def build_scenario(spec: SweepSpec) -> model.Hierarchy:
    return model.build_hierarchy(spec.scenario, spec.seed)


def run_single(jobs, hierarchy: model.Hierarchy, algorithm: str) -> engine.RunMetrics:
    """Schedule and execute one (jobs, hierarchy, algorithm) cell."""
    if algorithm == "ltf":
        hierarchy = ensure_ltf_fast_node(hierarchy)
    hierarchy = model.calibrate_service_rates(hierarchy, jobs)
    schedule = run_algorithm(algorithm, jobs, hierarchy)
    return engine.run(schedule, hierarchy, jobs)


def apply_device_case(hierarchy: model.Hierarchy, case: str) -> model.Hierarchy:
    """The four device-removal cases of the device-count sweep.

    a keeps everything; b drops the last device of tiers 1 and 2; c drops
    the tier-3 device; d drops the tier-4 device.  Cases touching a tier
    the hierarchy does not have leave it unchanged.
    """
    if case == "a":
        return hierarchy
    if case == "b":
        for tier_no in (1, 2):
            tier = next((t for t in hierarchy.tiers if t[0].tier == tier_no), None)
            if tier is not None and len(tier) > 1:
                hierarchy = model.remove_device(hierarchy, tier[-1].id)
        return hierarchy
    if case in ("c", "d"):
        tier_no = 3 if case == "c" else 4
        tier = next((t for t in hierarchy.tiers if t[0].tier == tier_no), None)
        if tier is not None:
            hierarchy = model.remove_device(hierarchy, tier[-1].id)
        return hierarchy
    raise ValueError(f"unknown device case {case!r}")


def _cell_hierarchy(spec: SweepSpec, value) -> model.Hierarchy:
    """Hierarchy variant for one axis value."""
    h = build_scenario(spec)
    if spec.axis == "delay":
        return model.with_delay_offset(h, value / 1000.0)
    if spec.axis == "mips":
        return model.with_capacity_increment(h, value)
    if spec.axis == "device-count":
        return apply_device_case(h, value)
    return h


def _cell_jobs(spec: SweepSpec, jobs, value) -> list:
    if spec.axis == "job-load":
        return workload.scale_load(jobs, value)
    return workload.scale_load(jobs, spec.base_multiplier)


def run_cell(spec: SweepSpec, value, algorithm: str, jobs=None) -> engine.RunMetrics:
    """Independent evaluation of a single sweep cell (the cross-check path)."""
    if jobs is None:
        jobs = load_jobs(spec)
    return run_single(_cell_jobs(spec, jobs, value), _cell_hierarchy(spec, value),
                      algorithm)


def _row(spec: SweepSpec, value, algorithm: str, metrics: engine.RunMetrics) -> dict:
    row = {
        "scenario": spec.scenario_name(),
        "seed": spec.seed,
        "algorithm": algorithm,
        "axis": spec.axis,
        "value": value,
        "tct": metrics.total_completion_time,
        "network_usage": metrics.network_usage,
        "cost_total": metrics.cost.total,
    }
    return {k: row[k] for k in TABLE_COLUMNS[spec.axis]}


def _eval_cell(args):
    spec, value, algorithm, jobs = args
    return _row(spec, value, algorithm, run_cell(spec, value, algorithm, jobs))


def run_sweep(spec: SweepSpec) -> list:
    """Evaluate the whole grid; rows come back in grid-then-algorithm order."""
    if spec.axis not in AXES:
        raise ValueError(f"unknown axis {spec.axis!r}; expected one of {AXES}")
    jobs = load_jobs(spec)
    cells = [(spec, value, algorithm, jobs)
             for value in spec.resolved_grid()
             for algorithm in spec.algorithms]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(_eval_cell, cells))
    return [_eval_cell(cell) for cell in cells]


def sweep_job_load(spec: SweepSpec) -> list:
    return run_sweep(_with_axis(spec, "job-load"))


def sweep_delay(spec: SweepSpec) -> list:
    return run_sweep(_with_axis(spec, "delay"))


def sweep_device_count(spec: SweepSpec) -> list:
    return run_sweep(_with_axis(spec, "device-count"))


def sweep_mips(spec: SweepSpec) -> list:
    return run_sweep(_with_axis(spec, "mips"))


def _with_axis(spec: SweepSpec, axis: str) -> SweepSpec:
    if spec.axis != axis:
        spec = SweepSpec(**{**spec.__dict__, "axis": axis, "grid": ()})
    return spec


def run_throughput(spec: SweepSpec, counts=THROUGHPUT_COUNTS,
                   bucket: float = THROUGHPUT_BUCKET_S) -> list:
    """Cumulative completion curves for growing prefixes of the job set."""
    jobs = workload.scale_load(load_jobs(spec), spec.base_multiplier)
    hierarchy = build_scenario(spec)
    rows = []
    for count in counts:
        subset = jobs[:count]
        if len(subset) < count:
            raise ValueError(f"job set has only {len(subset)} jobs, need {count}")
        for algorithm in spec.algorithms:
            metrics = run_single(subset, hierarchy, algorithm)
            for boundary, completed in engine.throughput(metrics, bucket):
                rows.append({
                    "scenario": spec.scenario_name(),
                    "seed": spec.seed,
                    "algorithm": algorithm,
                    "jobs": count,
                    "boundary": boundary,
                    "completed": completed,
                })
    return rows


def _format(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_table(rows, columns, path) -> None:
    """Delimiter-separated table with a header row and repr-formatted floats."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format(row[c]) for c in columns) + "\n")


def write_summary(path, config: dict) -> None:
    """key=value companion file recording the sweep configuration."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(config):
            fh.write(f"{key}={_format(config[key])}\n")
