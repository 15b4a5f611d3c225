"""Deterministic simulator for hierarchical fog-cloud job scheduling.

Builds tiered fog-cloud topologies, schedules jobs with first-fit,
min-min-elected, longest-first, and cloud-only strategies, executes the
schedules on a single-server-per-node engine, and sweeps load, delay,
device-count, and capacity parameters into analysis-ready tables.
"""

from .costmodel import (
    CostBreakdown,
    avg_completion_cost,
    avg_energy_cost,
    capacity_feasible,
    completion_time,
    execution_time,
    min_completion_time,
    network_usage,
    system_cost,
    tier_feasibility_probability,
)
from .engine import RunMetrics, run, throughput
from .model import (
    CLOUD,
    Assignment,
    CloudDc,
    FogDevice,
    Hierarchy,
    JobSpec,
    ScenarioSpec,
    Schedule,
    TierSpec,
    build_hierarchy,
    calibrate_service_rates,
    preset_spec,
    remove_device,
    validate,
    with_capacity_increment,
    with_delay_offset,
)
from .schedulers import cdc_only, efsa, fifsa, ltf, min_min, min_min_node, run_algorithm
from .workload import (
    TraceRecord,
    bundled_trace_path,
    jobs_from_trace,
    parse_trace,
    scale_load,
    synth_jobs,
)

__version__ = "0.1.0"
