"""Deterministic execution of a schedule: per-job timings and run metrics.

Each node is a single server; its assigned jobs execute sequentially in
commit order.  A job's delay term is the user-path delay of its node, and
its aggregate delay for network usage is twice that (submission plus
result return).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import costmodel
from .errors import FogschedError, InvalidSchedule
from .model import Hierarchy, Schedule

THROUGHPUT_BUCKET_S = 1.0


@dataclass(frozen=True)
class JobTiming:
    """Begin, execution, and completion times of one executed job."""

    bt: float
    et: float
    ct: float
    target: str
    tier: object


@dataclass
class RunMetrics:
    """Aggregate outcome of executing one schedule."""

    per_job: dict = field(default_factory=dict)  # job id -> JobTiming
    total_completion_time: float = 0.0
    network_usage: float = 0.0
    throughput_curve: tuple = ()
    cost: costmodel.CostBreakdown = field(default_factory=costmodel.CostBreakdown)
    sim_time: float = 0.0


def run(schedule: Schedule, hierarchy: Hierarchy, jobs) -> RunMetrics:
    """Execute a schedule and compute completion, usage, and cost metrics.

    Per node, a job begins at max(arrival, node availability) and occupies
    the node for its execution time; completion adds the node's user-path
    delay.  Simulation time is the makespan rounded up to a whole second,
    which keeps the network-usage denominator stable across float noise.
    """
    jobs = list(jobs)
    try:
        costmodel.check_schedule(schedule, hierarchy, jobs)
    except FogschedError as exc:
        raise InvalidSchedule(str(exc)) from exc

    job_by_id = {j.id: j for j in jobs}
    available = {}
    per_job = {}
    nu_records = []
    for a in schedule.assignments:
        job = job_by_id[a.job_id]
        node = hierarchy.node_by_id(a.target)
        et = costmodel.execution_time(job, node)
        bt = max(job.arrival_time, available.get(a.target, 0.0))
        available[a.target] = bt + et
        delay = hierarchy.user_delay(node)
        ct = costmodel.completion_time(job, node, bt, delay)
        per_job[a.job_id] = JobTiming(bt=bt, et=et, ct=ct, target=a.target, tier=a.tier)
        nu_records.append((job.data_volume, 2.0 * delay))

    tct = max((t.ct for t in per_job.values()), default=0.0)
    sim_time = float(math.ceil(tct))
    nu = costmodel.network_usage(nu_records, sim_time) if sim_time > 0 else 0.0
    metrics = RunMetrics(
        per_job=per_job,
        total_completion_time=tct,
        network_usage=nu,
        cost=costmodel.system_cost(schedule, hierarchy, jobs),
        sim_time=sim_time,
    )
    metrics.throughput_curve = throughput(metrics, THROUGHPUT_BUCKET_S)
    return metrics


def throughput(metrics: RunMetrics, bucket: float) -> tuple:
    """Cumulative completed-job counts at bucket boundaries.

    Returns ((boundary_seconds, completed_count), ...) up to the first
    boundary at or past the makespan; empty when no jobs ran.
    """
    if bucket <= 0:
        raise ValueError("bucket must be > 0")
    cts = sorted(t.ct for t in metrics.per_job.values())
    if not cts:
        return ()
    curve = []
    done = 0
    idx = 0
    k = 1
    while done < len(cts):
        boundary = bucket * k
        while idx < len(cts) and cts[idx] <= boundary:
            idx += 1
        done = idx
        curve.append((boundary, done))
        k += 1
    return tuple(curve)


def serialize_metrics(metrics: RunMetrics) -> str:
    """Flat record format: one CSV row per job plus one summary row.

    Columns: record,job_id,target,tier,bt,et,ct,tct,network_usage,sim_time,
    cost_total.  Job rows leave the summary columns empty and vice versa.
    Floats are written with repr so identical runs serialize identically.
    """
    lines = ["record,job_id,target,tier,bt,et,ct,tct,network_usage,sim_time,cost_total"]
    for job_id in sorted(metrics.per_job):
        t = metrics.per_job[job_id]
        lines.append(
            f"job,{job_id},{t.target},{t.tier},{t.bt!r},{t.et!r},{t.ct!r},,,,")
    lines.append(
        "summary,,,,,,,"
        f"{metrics.total_completion_time!r},{metrics.network_usage!r},"
        f"{metrics.sim_time!r},{metrics.cost.total!r}")
    return "\n".join(lines) + "\n"
