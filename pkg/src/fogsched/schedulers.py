"""Scheduling strategies for tiered fog-cloud hierarchies.

Four strategies share the same contract: jobs plus an immutable hierarchy
in, a Schedule out.  Every job ends up assigned exactly once, and no fog
device's committed cpu demand ever exceeds its capacity (the cloud is the
unbounded fallback).  All tie-breaks are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .costmodel import completion_time, execution_time
from .errors import EmptyDeviceSet, EmptyQueue
from .model import (
    CLOUD,
    Assignment,
    CloudDc,
    FogDevice,
    Hierarchy,
    JobSpec,
    Schedule,
)

# The "fast node" class used by the longest-time-first baseline: one device
# of this capacity alongside the tier-1 devices.
LTF_FAST_CAPACITY = 6500.0
# User-path delay for a synthesized fast node: midpoint of the 10.2-18 ms
# range its capacity class occupies in the presets.
LTF_FAST_DELAY_S = 0.0141


@dataclass(frozen=True)
class TierQueue:
    """Jobs routed to one tier (or to the cloud) before dispatch."""

    tier: object  # tier number, or CLOUD
    jobs: tuple  # job ids in queue order


@dataclass
class LoadState:
    """Mutable bookkeeping for one scheduling pass."""

    cl: dict = field(default_factory=dict)  # node id -> committed load (s)
    spare: dict = field(default_factory=dict)  # device id -> remaining MIPS

    @classmethod
    def for_devices(cls, devices) -> "LoadState":
        return cls(
            cl={d.id: 0.0 for d in devices},
            spare={d.id: d.capacity for d in devices},
        )


def _sorted_by_demand(jobs) -> list:
    return sorted(jobs, key=lambda j: (j.cpu_demand, j.id))


def fifsa(jobs, hierarchy: Hierarchy) -> Schedule:
    """First-fit over tiers, smallest cpu demand first.

    Jobs are taken in increasing cpu-demand order and scanned against tier-1
    devices in id order, then tier-2 and so on; the first device with enough
    spare capacity gets the job and its spare shrinks by the job's demand.
    Jobs no fog device can take go to the cloud.
    """
    spare = {d.id: d.capacity for d in hierarchy.devices()}
    assignments = []
    for job in _sorted_by_demand(jobs):
        placed = False
        for tier in hierarchy.tiers:
            for dev in tier:
                if spare[dev.id] >= job.cpu_demand:
                    spare[dev.id] -= job.cpu_demand
                    assignments.append(Assignment(job.id, dev.id, dev.tier))
                    placed = True
                    break
            if placed:
                break
        if not placed:
            assignments.append(Assignment(job.id, hierarchy.cloud.id, CLOUD))
    return Schedule(algorithm="fifsa", assignments=tuple(assignments))


def partition_by_tier(jobs, hierarchy: Hierarchy):
    """Split jobs into per-tier queues by lowest feasible tier capacity.

    A job lands in the first tier whose per-device capacity covers its cpu
    demand; jobs exceeding every tier go to the cloud queue.
    """
    queues = {tier[0].tier: [] for tier in hierarchy.tiers}
    cloud_jobs = []
    for job in jobs:
        for tier in hierarchy.tiers:
            if tier[0].capacity >= job.cpu_demand:
                queues[tier[0].tier].append(job)
                break
        else:
            cloud_jobs.append(job)
    return queues, cloud_jobs


def min_min_node(queue_jobs, load: LoadState, devices):
    """Best (device, job) pair: minimal committed-load-plus-completion-time.

    Completion time is evaluated with the device's committed load as the
    begin time.  Only pairs the device has spare capacity for are eligible;
    returns None when no pair is feasible.  Ties break to the lower
    completion time, then device order, then job order.
    """
    queue_jobs = list(queue_jobs)
    devices = list(devices)
    if not queue_jobs:
        raise EmptyQueue("min_min_node needs a non-empty queue")
    if not devices:
        raise EmptyDeviceSet("min_min_node needs devices")
    best = None
    best_key = None
    for j_pos, job in enumerate(queue_jobs):
        for d_pos, dev in enumerate(devices):
            if load.spare[dev.id] < job.cpu_demand:
                continue
            ct = completion_time(job, dev, load.cl[dev.id], dev.user_delay)
            key = (load.cl[dev.id] + ct, ct, d_pos, j_pos)
            if best_key is None or key < best_key:
                best, best_key = (dev, job), key
    return best


def min_min(queue_jobs, devices, load: LoadState = None):
    """Commit min-min pairs until the queue drains.

    Each iteration commits the globally best pair, adds the pair's
    completion time to the device's committed load, and shrinks its spare
    capacity.  Jobs no device can take any more are returned as overflow.

    Returns:
        (assignments in commit order, overflow jobs in queue order)
    """
    devices = list(devices)
    if not devices:
        raise EmptyDeviceSet("min_min needs devices")
    if load is None:
        load = LoadState.for_devices(devices)
    remaining = list(queue_jobs)
    assignments = []
    while remaining:
        pick = min_min_node(remaining, load, devices)
        if pick is None:
            break
        dev, job = pick
        ct = completion_time(job, dev, load.cl[dev.id], dev.user_delay)
        load.cl[dev.id] += ct
        load.spare[dev.id] -= job.cpu_demand
        remaining.remove(job)
        assignments.append(Assignment(job.id, dev.id, dev.tier))
    return assignments, remaining


@dataclass(frozen=True)
class Candidate:
    """Device plus its user-path delay; min-min and LTF need both at once."""

    id: str
    tier: int
    capacity: float
    user_delay: float


def candidates(devices, hierarchy: Hierarchy) -> list:
    """Wrap devices with their user-path delays for pool-based scheduling."""
    return [
        Candidate(d.id, d.tier, d.capacity, hierarchy.user_delay(d))
        for d in devices
    ]


def efsa(jobs, hierarchy: Hierarchy) -> Schedule:
    """Partition jobs to their lowest feasible tier, then min-min per tier.

    Every non-empty tier queue is dispatched, tier 1 upward.  Jobs that fit
    no tier, plus min-min overflow, run on the cloud in arrival order.
    """
    jobs = list(jobs)
    order = {j.id: pos for pos, j in enumerate(jobs)}
    queues, cloud_jobs = partition_by_tier(jobs, hierarchy)

    assignments = []
    tier_queues = []
    for tier in hierarchy.tiers:
        tier_no = tier[0].tier
        queued = queues[tier_no]
        tier_queues.append(TierQueue(tier_no, tuple(j.id for j in queued)))
        if not queued:
            continue
        committed, overflow = min_min(queued, candidates(tier, hierarchy))
        assignments.extend(committed)
        cloud_jobs.extend(overflow)

    cloud_jobs.sort(key=lambda j: (j.arrival_time, order[j.id]))
    tier_queues.append(TierQueue(CLOUD, tuple(j.id for j in cloud_jobs)))
    for job in cloud_jobs:
        assignments.append(Assignment(job.id, hierarchy.cloud.id, CLOUD))
    return Schedule(algorithm="efsa", assignments=tuple(assignments),
                    queues=tuple(tier_queues))


def ensure_ltf_fast_node(hierarchy: Hierarchy) -> Hierarchy:
    """Hierarchy guaranteed to contain the baseline's fast-node class.

    If no fog device reaches the fast-node capacity, a single device of that
    class is appended as an extra top tier with a fixed user-path delay.
    """
    if any(d.capacity >= LTF_FAST_CAPACITY for d in hierarchy.devices()):
        return hierarchy
    top = hierarchy.tiers[-1][0].tier
    fast = FogDevice(
        id=f"fd{top + 1}-1",
        tier=top + 1,
        capacity=LTF_FAST_CAPACITY,
        service_rate=hierarchy.tiers[0][0].service_rate
        * LTF_FAST_CAPACITY / hierarchy.tiers[0][0].capacity,
        energy_coeff=LTF_FAST_CAPACITY,
    )
    link_delays = dict(hierarchy.link_delays)
    # Recorded as a single hop; validation only requires hop-count == tier
    # for devices built by build_hierarchy, not for augmented pools.
    link_delays[fast.id] = (LTF_FAST_DELAY_S,)
    return replace(
        hierarchy,
        tiers=hierarchy.tiers + ((fast,),),
        link_delays=link_delays,
    )


def ltf_pool(hierarchy: Hierarchy) -> list:
    """The baseline's device pool: the tier-1 devices plus one fast node.

    The fast node is the first device (scanning tiers upward) whose capacity
    reaches the fast-node class; run ensure_ltf_fast_node first when the
    hierarchy may lack one.
    """
    pool = list(hierarchy.tiers[0])
    for tier in hierarchy.tiers[1:]:
        fast = next((d for d in tier if d.capacity >= LTF_FAST_CAPACITY), None)
        if fast is not None:
            pool.append(fast)
            break
    return pool


def classify_pool(devices):
    """Split a pool into (slow, fast) by strict comparison to mean capacity."""
    devices = list(devices)
    mean_cap = sum(d.capacity for d in devices) / len(devices)
    slow = [d for d in devices if d.capacity < mean_cap]
    fast = [d for d in devices if d.capacity > mean_cap]
    return slow, fast


def ltf(jobs, hierarchy: Hierarchy) -> Schedule:
    """Longest-time-first baseline over a slow/fast node pool.

    Jobs are taken longest execution time first and committed to the pool
    node finishing them earliest given committed load; a node's load
    advances by execution time.  Jobs the pool cannot take run on the cloud.
    """
    pool = candidates(ltf_pool(hierarchy), hierarchy)
    load = LoadState(
        cl={d.id: 0.0 for d in pool},
        spare={d.id: d.capacity for d in pool},
    )
    tier_of = {d.id: d.tier for d in pool}
    assignments = []
    for job in sorted(jobs, key=lambda j: (-j.length, j.id)):
        best = None
        best_key = None
        for pos, dev in enumerate(pool):
            if load.spare[dev.id] < job.cpu_demand:
                continue
            ct = completion_time(job, dev, load.cl[dev.id], dev.user_delay)
            key = (ct, pos)
            if best_key is None or key < best_key:
                best, best_key = dev, key
        if best is None:
            assignments.append(Assignment(job.id, hierarchy.cloud.id, CLOUD))
            continue
        load.cl[best.id] += execution_time(job, best)
        load.spare[best.id] -= job.cpu_demand
        assignments.append(Assignment(job.id, best.id, tier_of[best.id]))
    return Schedule(algorithm="ltf", assignments=tuple(assignments))


def cdc_only(jobs, hierarchy: Hierarchy) -> Schedule:
    """Everything on the cloud data center, in arrival order."""
    jobs = list(jobs)
    order = {j.id: pos for pos, j in enumerate(jobs)}
    assignments = tuple(
        Assignment(j.id, hierarchy.cloud.id, CLOUD)
        for j in sorted(jobs, key=lambda j: (j.arrival_time, order[j.id]))
    )
    return Schedule(algorithm="cdc-only", assignments=assignments)


ALGORITHMS = {
    "fifsa": fifsa,
    "efsa": efsa,
    "ltf": ltf,
    "cdc-only": cdc_only,
}


def run_algorithm(name: str, jobs, hierarchy: Hierarchy) -> Schedule:
    """Dispatch by algorithm name; see ALGORITHMS for the known names."""
    try:
        fn = ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; "
                         f"expected one of {sorted(ALGORITHMS)}") from None
    return fn(jobs, hierarchy)
