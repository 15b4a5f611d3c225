"""Closed-form cost functions: completion time, M/M/1 queueing cost,
energy cost, per-tier system cost, network usage, and feasibility checks.

All functions are pure; nothing here mutates a hierarchy or schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import (
    CapacityViolation,
    EmptyCandidateSet,
    EmptyJobSet,
    UnassignedJob,
    UnstableQueue,
    ZeroSimTime,
)
from .model import CLOUD, CloudDc, Hierarchy, JobSpec, Node, Schedule

REL_TOL = 1e-9


@dataclass
class CostBreakdown:
    """System cost split by tier plus the cloud term."""

    per_tier: dict = field(default_factory=dict)  # tier -> cost
    cloud: float = 0.0
    act_sum: float = 0.0  # summed completion-time cost terms (seconds)
    aec_sum: float = 0.0  # summed energy cost terms

    @property
    def total(self) -> float:
        return sum(self.per_tier.values()) + self.cloud


def execution_time(job: JobSpec, node: Node) -> float:
    """Seconds to execute the job's instructions at the node's capacity."""
    return job.length / node.capacity


def completion_time(job: JobSpec, node: Node, begin: float, delay: float) -> float:
    """begin + execution + link delay, each in seconds."""
    if begin < 0 or delay < 0:
        raise ValueError("begin and delay must be >= 0")
    return begin + execution_time(job, node) + delay


def _node_tier(node: Node) -> float:
    return math.inf if isinstance(node, CloudDc) else node.tier


def min_completion_time(job: JobSpec, candidates, begin_times, delays):
    """Candidate with the smallest completion time for this job.

    Ties break to the lowest tier, then to the earliest candidate in the
    given order (callers list devices in id order).

    Returns:
        (node, completion_time_seconds)
    """
    candidates = list(candidates)
    if not candidates:
        raise EmptyCandidateSet("min_completion_time needs candidates")
    best = None
    best_key = None
    for pos, (node, bt, d) in enumerate(zip(candidates, begin_times, delays)):
        ct = completion_time(job, node, bt, d)
        key = (ct, _node_tier(node), pos)
        if best_key is None or key < best_key:
            best, best_key = (node, ct), key
    return best


def avg_completion_cost(node: Node) -> float:
    """M/M/1 mean time in system, 1 / (mu - lambda)."""
    if node.service_rate <= node.assigned_rate:
        raise UnstableQueue(
            f"{node.id}: arrival rate {node.assigned_rate} >= "
            f"service rate {node.service_rate}")
    return 1.0 / (node.service_rate - node.assigned_rate)


def avg_energy_cost(node: Node) -> float:
    """Energy cost: execution-capacity coefficient times the queueing cost."""
    return node.energy_coeff * avg_completion_cost(node)


def capacity_feasible(node: Node, job: JobSpec) -> bool:
    """Whether the node's remaining spare capacity covers the job's demand.

    The cloud is treated as unbounded.
    """
    if isinstance(node, CloudDc):
        return True
    return node.spare_capacity >= job.cpu_demand


def workload_span(jobs) -> float:
    """Arrival span in seconds, floored at one second for batch job sets."""
    arrivals = [j.arrival_time for j in jobs]
    if not arrivals:
        return 1.0
    span = max(arrivals) - min(arrivals)
    return span if span > 0 else 1.0


def check_schedule(schedule: Schedule, hierarchy: Hierarchy, jobs) -> None:
    """Raise unless each job is assigned exactly once within fog capacity."""
    job_by_id = {j.id: j for j in jobs}
    seen = set()
    for a in schedule.assignments:
        if a.job_id not in job_by_id:
            raise UnassignedJob(f"assignment for unknown job {a.job_id}")
        if a.job_id in seen:
            raise UnassignedJob(f"job {a.job_id} assigned more than once")
        seen.add(a.job_id)
    missing = set(job_by_id) - seen
    if missing:
        raise UnassignedJob(f"jobs never assigned: {sorted(missing)}")

    committed = {}
    for a in schedule.assignments:
        if a.tier == CLOUD:
            continue
        committed[a.target] = committed.get(a.target, 0.0) + job_by_id[a.job_id].cpu_demand
    for dev in hierarchy.devices():
        demand = committed.get(dev.id, 0.0)
        if demand > dev.capacity * (1 + REL_TOL):
            raise CapacityViolation(
                f"{dev.id}: committed demand {demand} exceeds capacity {dev.capacity}")


def system_cost(schedule: Schedule, hierarchy: Hierarchy, jobs) -> CostBreakdown:
    """Per-tier and cloud sums of (queueing cost + energy cost) per job.

    Each node's arrival rate is its assigned job count divided by the
    workload's arrival span (one second for a batch).
    """
    jobs = list(jobs)
    check_schedule(schedule, hierarchy, jobs)

    span = workload_span(jobs)
    counts = {}
    for a in schedule.assignments:
        counts[a.target] = counts.get(a.target, 0) + 1

    loaded = {}
    for dev in hierarchy.devices():
        loaded[dev.id] = replace(dev, assigned_rate=counts.get(dev.id, 0) / span)
    loaded[hierarchy.cloud.id] = replace(
        hierarchy.cloud, assigned_rate=counts.get(hierarchy.cloud.id, 0) / span)

    breakdown = CostBreakdown()
    for a in schedule.assignments:
        node = loaded[a.target]
        act = avg_completion_cost(node)
        aec = avg_energy_cost(node)
        breakdown.act_sum += act
        breakdown.aec_sum += aec
        if a.tier == CLOUD:
            breakdown.cloud += act + aec
        else:
            breakdown.per_tier[a.tier] = breakdown.per_tier.get(a.tier, 0.0) + act + aec
    return breakdown


def network_usage(records, sim_time: float) -> float:
    """Sum of data-volume times aggregate delay, divided by simulation time.

    ``records`` is an iterable of (data_volume, aggregate_delay) pairs.
    """
    if sim_time <= 0:
        raise ZeroSimTime("network usage needs sim_time > 0")
    return sum(dv * ad for dv, ad in records) / sim_time


def tier_feasibility_probability(jobs, tier_capacity: float) -> float:
    """Probability that a tier can host every job, estimated empirically.

    Each job's fit probability is the fraction of the population whose cpu
    demand is within the tier capacity; the jobs are treated as independent
    so the result is that fraction raised to the job count.  Diagnostic only.
    """
    jobs = list(jobs)
    if not jobs:
        raise EmptyJobSet("tier_feasibility_probability needs jobs")
    p = sum(1 for j in jobs if j.cpu_demand <= tier_capacity) / len(jobs)
    return p ** len(jobs)
