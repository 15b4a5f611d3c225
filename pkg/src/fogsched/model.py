"""Domain types: jobs, devices, tiered fog-cloud hierarchies, and schedules.

A hierarchy is immutable after construction.  Transform helpers return new
hierarchies, so a single instance can be shared across parallel runs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from statistics import fmean
from typing import Iterator, Union

from .errors import (
    EmptyTier,
    InvalidDelayRange,
    NonIncreasingTierCapacity,
)

# Sentinel used as the "tier" of cloud assignments and cloud queues.
CLOUD = "cdc"

# Per-hop delay ranges in milliseconds: user->FD1, FD1->FD2, FD2->FD3, FD3->FD4.
# Cumulative user-path ranges come out to (1,3), (4.1,9), (10.2,18), (19.3,30).
_HOP_RANGES_MS = [(1.0, 3.0), (3.1, 6.0), (6.1, 9.0), (9.1, 12.0)]
_TIER_CAPACITIES = [2000.0, 3500.0, 6500.0, 8500.0]
_TIER_COUNTS = [5, 5, 1, 1]
_CLOUD_CAPACITY = 57980.0
_CLOUD_DELAY_MS = 140.0

PRESET_NAMES = ("flat", "two-tier", "three-tier", "four-tier")


@dataclass(frozen=True)
class JobSpec:
    """One schedulable job."""

    id: str
    cpu_demand: float  # MIPS required, compared against device capacity
    length: float  # millions of instructions to execute
    data_volume: float = 0.0
    arrival_time: float = 0.0

    def __post_init__(self):
        if self.cpu_demand <= 0:
            raise ValueError(f"job {self.id}: cpu_demand must be > 0")
        if self.length <= 0:
            raise ValueError(f"job {self.id}: length must be > 0")
        if self.data_volume < 0:
            raise ValueError(f"job {self.id}: data_volume must be >= 0")
        if self.arrival_time < 0:
            raise ValueError(f"job {self.id}: arrival_time must be >= 0")


@dataclass(frozen=True)
class FogDevice:
    """An execution node in one fog tier."""

    id: str
    tier: int
    capacity: float  # MIPS
    service_rate: float  # jobs/second, used by the queueing cost model
    energy_coeff: float  # average job execution capacity (MIPS)
    assigned_rate: float = 0.0  # jobs/second accumulated from assignments
    spare_capacity: float = None  # type: ignore[assignment]  # defaults to capacity

    def __post_init__(self):
        if self.spare_capacity is None:
            object.__setattr__(self, "spare_capacity", self.capacity)
        if self.tier < 1:
            raise ValueError(f"device {self.id}: tier must be >= 1")
        if self.capacity <= 0 or self.service_rate <= 0 or self.energy_coeff <= 0:
            raise ValueError(f"device {self.id}: capacity, service_rate and "
                             "energy_coeff must be > 0")
        if self.assigned_rate < 0:
            raise ValueError(f"device {self.id}: assigned_rate must be >= 0")


@dataclass(frozen=True)
class CloudDc:
    """The cloud data center at the top of the hierarchy."""

    id: str
    capacity: float
    service_rate: float
    energy_coeff: float
    assigned_rate: float = 0.0

    def __post_init__(self):
        if self.capacity <= 0 or self.service_rate <= 0 or self.energy_coeff <= 0:
            raise ValueError("cloud: capacity, service_rate and energy_coeff "
                             "must be > 0")


Node = Union[FogDevice, CloudDc]


@dataclass(frozen=True)
class Assignment:
    """Binding of one job to one execution node."""

    job_id: str
    target: str  # device id or the cloud id
    tier: object  # tier number, or CLOUD
    flag: bool = True


@dataclass(frozen=True)
class Schedule:
    """Ordered job-to-node assignments produced by one scheduling pass.

    Assignment order is the commit order; the engine executes each node's
    jobs in this order.  ``queues`` records the tier-queue partition for
    algorithms that build one (empty otherwise).
    """

    algorithm: str
    assignments: tuple = ()
    queues: tuple = ()

    def by_job(self) -> dict:
        return {a.job_id: a for a in self.assignments}


@dataclass(frozen=True)
class Hierarchy:
    """Tiered fog devices plus the cloud, with per-device link delays.

    ``link_delays`` maps a device id to its per-hop delays in seconds
    (user->tier1, tier1->tier2, ... up to the device's own tier).  The
    user-path delay of a device is the sum of its hops.
    """

    tiers: tuple  # tuple of tuples of FogDevice
    cloud: CloudDc
    link_delays: dict  # device id -> tuple of hop delays (seconds)
    cloud_delay: float  # user->cdc delay (seconds)
    rng_seed: int = 0

    def user_delay(self, node: Node) -> float:
        """User-path delay in seconds for any node of this hierarchy."""
        if isinstance(node, CloudDc):
            return self.cloud_delay
        return sum(self.link_delays[node.id])

    def devices(self) -> Iterator[FogDevice]:
        for tier in self.tiers:
            yield from tier

    def device_count(self) -> int:
        return sum(len(t) for t in self.tiers)

    def find_device(self, device_id: str) -> FogDevice:
        for dev in self.devices():
            if dev.id == device_id:
                return dev
        raise KeyError(device_id)

    def node_by_id(self, target: str) -> Node:
        if target == self.cloud.id:
            return self.cloud
        return self.find_device(target)


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by validate()."""

    code: str
    detail: str


@dataclass
class TierSpec:
    """Declarative description of one fog tier."""

    count: int
    capacity_mips: float
    user_delay_ms_range: tuple  # (lo, hi) cumulative user-path delay


@dataclass
class ScenarioSpec:
    """Declarative description of a whole hierarchy, file round-trippable."""

    tiers: list = field(default_factory=list)
    cloud_capacity_mips: float = _CLOUD_CAPACITY
    cloud_user_delay_ms: float = _CLOUD_DELAY_MS
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "tiers": [
                {
                    "count": t.count,
                    "capacity_mips": t.capacity_mips,
                    "user_delay_ms_range": list(t.user_delay_ms_range),
                }
                for t in self.tiers
            ],
            "cloud": {
                "capacity_mips": self.cloud_capacity_mips,
                "user_delay_ms": self.cloud_user_delay_ms,
            },
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioSpec":
        tiers = [
            TierSpec(
                count=int(t["count"]),
                capacity_mips=float(t["capacity_mips"]),
                user_delay_ms_range=(
                    float(t["user_delay_ms_range"][0]),
                    float(t["user_delay_ms_range"][1]),
                ),
            )
            for t in raw["tiers"]
        ]
        cloud = raw["cloud"]
        return cls(
            tiers=tiers,
            cloud_capacity_mips=float(cloud["capacity_mips"]),
            cloud_user_delay_ms=float(cloud["user_delay_ms"]),
            seed=int(raw.get("seed", 0)),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ScenarioSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def preset_spec(name: str) -> ScenarioSpec:
    """Scenario spec for one of the four canonical topologies."""
    key = name.lower().replace("_", "-")
    aliases = {
        "flat": 1, "flat-tier": 1, "1-tier": 1,
        "two-tier": 2, "2-tier": 2,
        "three-tier": 3, "3-tier": 3,
        "four-tier": 4, "4-tier": 4,
    }
    if key not in aliases:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    depth = aliases[key]
    tiers = []
    lo_sum = hi_sum = 0.0
    for t in range(depth):
        lo_sum += _HOP_RANGES_MS[t][0]
        hi_sum += _HOP_RANGES_MS[t][1]
        tiers.append(TierSpec(
            count=_TIER_COUNTS[t],
            capacity_mips=_TIER_CAPACITIES[t],
            user_delay_ms_range=(round(lo_sum, 6), round(hi_sum, 6)),
        ))
    return ScenarioSpec(tiers=tiers)


def _hop_ranges_ms(spec: ScenarioSpec) -> list:
    """Per-hop (lo, hi) ranges derived from cumulative user-path ranges."""
    hops = []
    prev_lo = prev_hi = 0.0
    for idx, tier in enumerate(spec.tiers, start=1):
        lo, hi = tier.user_delay_ms_range
        hop_lo, hop_hi = lo - prev_lo, hi - prev_hi
        if hop_lo <= 0 or hop_hi < hop_lo:
            raise InvalidDelayRange(
                f"tier {idx}: user delay range {tier.user_delay_ms_range} does "
                "not extend the previous tier's range by a positive hop")
        hops.append((hop_lo, hop_hi))
        prev_lo, prev_hi = lo, hi
    return hops


def build_hierarchy(preset, seed: int = 0) -> Hierarchy:
    """Construct a validated hierarchy from a preset name or ScenarioSpec.

    Per-device hop delays are drawn once, uniformly within each hop's range,
    from a single seeded stream (tiers in order, devices in order, hops in
    order).  Shallower presets therefore draw a prefix of deeper presets'
    values, which keeps shared devices identical across depths for one seed.
    """
    if isinstance(preset, str):
        spec = preset_spec(preset)
    else:
        spec = preset
    if not spec.tiers:
        raise EmptyTier("a hierarchy needs at least one fog tier")
    for idx, tier in enumerate(spec.tiers, start=1):
        if tier.count < 1:
            raise EmptyTier(f"tier {idx} has no devices")
        if idx > 1 and tier.capacity_mips <= spec.tiers[idx - 2].capacity_mips:
            raise NonIncreasingTierCapacity(
                f"tier {idx} capacity {tier.capacity_mips} must exceed "
                f"tier {idx - 1} capacity {spec.tiers[idx - 2].capacity_mips}")
    if spec.cloud_capacity_mips <= spec.tiers[-1].capacity_mips:
        raise NonIncreasingTierCapacity(
            "cloud capacity must exceed the top fog tier's capacity")

    hop_ranges = _hop_ranges_ms(spec)
    rng = random.Random(seed)
    tiers = []
    link_delays = {}
    for t_idx, tier in enumerate(spec.tiers, start=1):
        devices = []
        for d_idx in range(1, tier.count + 1):
            dev_id = f"fd{t_idx}-{d_idx}"
            hops = tuple(
                rng.uniform(*hop_ranges[h]) / 1000.0 for h in range(t_idx)
            )
            link_delays[dev_id] = hops
            devices.append(FogDevice(
                id=dev_id,
                tier=t_idx,
                capacity=tier.capacity_mips,
                service_rate=tier.capacity_mips,  # recalibrated per scenario
                energy_coeff=tier.capacity_mips,
            ))
        tiers.append(tuple(devices))

    cloud = CloudDc(
        id="cdc",
        capacity=spec.cloud_capacity_mips,
        service_rate=spec.cloud_capacity_mips,
        energy_coeff=spec.cloud_capacity_mips,
    )
    h = Hierarchy(
        tiers=tuple(tiers),
        cloud=cloud,
        link_delays=link_delays,
        cloud_delay=spec.cloud_user_delay_ms / 1000.0,
        rng_seed=seed,
    )
    problems = validate(h)
    if problems:
        raise InvalidDelayRange("; ".join(f"{v.code}: {v.detail}" for v in problems))
    return h


def validate(h: Hierarchy) -> list:
    """Check every hierarchy invariant; returns violations, never raises."""
    out = []
    prev_cap = 0.0
    for tier in h.tiers:
        if not tier:
            out.append(Violation("EmptyTier", "tier with no devices"))
            continue
        caps = {d.capacity for d in tier}
        if len(caps) > 1:
            out.append(Violation(
                "IntraTierHeterogeneity",
                f"tier {tier[0].tier} devices differ in capacity: {sorted(caps)}"))
        cap = tier[0].capacity
        if cap <= prev_cap:
            out.append(Violation(
                "NonIncreasingTierCapacity",
                f"tier {tier[0].tier} capacity {cap} <= lower tier {prev_cap}"))
        prev_cap = max(prev_cap, cap)
    if h.cloud.capacity <= prev_cap:
        out.append(Violation(
            "NonIncreasingTierCapacity",
            f"cloud capacity {h.cloud.capacity} <= top fog tier {prev_cap}"))

    max_fog_delay = 0.0
    for dev in h.devices():
        hops = h.link_delays.get(dev.id)
        if hops is None:
            out.append(Violation("MissingDelay", f"no hop delays for {dev.id}"))
            continue
        if any(hop <= 0 for hop in hops):
            out.append(Violation("NonPositiveDelay", f"{dev.id} hops {hops}"))
        total = sum(hops)
        max_fog_delay = max(max_fog_delay, total)
        # Path additivity is structural here (user delay is defined as the
        # hop sum), so only the hop count can break it.
        if len(hops) != dev.tier:
            out.append(Violation(
                "PathAdditivityBroken",
                f"{dev.id} at tier {dev.tier} records {len(hops)} hops"))
    if h.cloud_delay <= 0:
        out.append(Violation("NonPositiveDelay", f"cloud delay {h.cloud_delay}"))
    if h.cloud_delay <= max_fog_delay:
        out.append(Violation(
            "CloudDelayNotMaximal",
            f"user->cdc {h.cloud_delay}s <= max fog user-path {max_fog_delay}s"))
    return out


def calibrate_service_rates(h: Hierarchy, jobs) -> Hierarchy:
    """Hierarchy with service rates set to capacity / mean job length.

    The queueing cost model needs jobs-per-second rates; this derives them
    from the loaded job set and must be re-applied whenever the job set (or
    a capacity) changes.  Scheduling decisions never read service rates, so
    calibration cannot alter a schedule.
    """
    jobs = list(jobs)
    if not jobs:
        return h
    mean_len = fmean(j.length for j in jobs)
    tiers = tuple(
        tuple(replace(d, service_rate=d.capacity / mean_len) for d in tier)
        for tier in h.tiers
    )
    cloud = replace(h.cloud, service_rate=h.cloud.capacity / mean_len)
    return replace(h, tiers=tiers, cloud=cloud)


def remove_device(h: Hierarchy, device_id: str) -> Hierarchy:
    """Hierarchy without one device; an emptied tier disappears entirely.

    Remaining devices keep their drawn delays, so removing the devices of a
    deeper preset's top tier reproduces the shallower preset bit-for-bit.
    """
    found = False
    tiers = []
    link_delays = dict(h.link_delays)
    for tier in h.tiers:
        kept = tuple(d for d in tier if d.id != device_id)
        if len(kept) != len(tier):
            found = True
            link_delays.pop(device_id, None)
        if kept:
            tiers.append(kept)
    if not found:
        raise KeyError(device_id)
    return replace(h, tiers=tuple(tiers), link_delays=link_delays)


def with_delay_offset(h: Hierarchy, offset_s: float) -> Hierarchy:
    """Add a fixed offset to every fog device's user-path delay.

    The offset lands on the first hop so path additivity still holds; the
    cloud delay is left untouched.
    """
    link_delays = {
        dev_id: (hops[0] + offset_s,) + hops[1:]
        for dev_id, hops in h.link_delays.items()
    }
    return replace(h, link_delays=link_delays)


def with_capacity_increment(h: Hierarchy, inc: float) -> Hierarchy:
    """Raise every fog tier's capacity (and energy coefficient) by ``inc``.

    Service rates are reset to the new capacities; callers re-calibrate
    against their job set afterwards.  The cloud is untouched.
    """
    tiers = tuple(
        tuple(
            replace(d, capacity=d.capacity + inc, service_rate=d.capacity + inc,
                    energy_coeff=d.energy_coeff + inc,
                    spare_capacity=d.capacity + inc)
            for d in tier
        )
        for tier in h.tiers
    )
    return replace(h, tiers=tiers)
