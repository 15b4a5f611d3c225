"""Cluster-trace ingestion, job derivation, load scaling, and synthesis.

Trace files are delimiter-separated text with five columns in this order:
timestamp, machine_id, cpu_utilisation, memory_utilisation,
disk_utilisation.  Utilisations are percentages in [0, 100].  A header
line is optional.  Memory and disk columns are parsed and preserved but
influence nothing downstream.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from importlib import resources

from .errors import EmptyTrace, InvalidRange, NoValidRows
from .model import JobSpec

DEFAULT_MIPS_PER_PERCENT = 20.0
DEFAULT_DATA_PER_PERCENT = 10.0
TRACE_COLUMNS = ("timestamp", "machine_id", "cpu_utilisation",
                 "memory_utilisation", "disk_utilisation")


@dataclass(frozen=True)
class TraceRecord:
    """One utilisation sample from a cluster trace."""

    timestamp: float
    machine_id: str
    cpu_utilisation: float
    memory_utilisation: float
    disk_utilisation: float

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError("timestamp must be >= 0")
        for name in ("cpu_utilisation", "memory_utilisation", "disk_utilisation"):
            value = getattr(self, name)
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{name} must be in [0, 100], got {value}")


@dataclass
class ParseResult:
    """Parsed records plus a tally of every rejected row."""

    records: list = field(default_factory=list)
    rejected: Counter = field(default_factory=Counter)  # reason -> count

    @property
    def rejected_total(self) -> int:
        return sum(self.rejected.values())


def _parse_row(parts) -> TraceRecord:
    return TraceRecord(
        timestamp=float(parts[0]),
        machine_id=parts[1].strip(),
        cpu_utilisation=float(parts[2]),
        memory_utilisation=float(parts[3]),
        disk_utilisation=float(parts[4]),
    )


def parse_trace(path, delimiter: str = ",") -> ParseResult:
    """Parse a trace file; malformed rows are tallied, never silently lost.

    Raises NoValidRows when nothing parses (FileNotFoundError propagates for
    a missing file).  A first line that fails numeric parsing is treated as
    the optional header rather than an error.
    """
    result = ParseResult()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(delimiter)
            if len(parts) != len(TRACE_COLUMNS):
                result.rejected["column-count-mismatch"] += 1
                continue
            try:
                result.records.append(_parse_row(parts))
            except ValueError as exc:
                if line_no == 1 and parts[0].strip().lower() == TRACE_COLUMNS[0]:
                    continue  # header line
                reason = "out-of-range" if "must be" in str(exc) else "unparseable"
                result.rejected[reason] += 1
    if not result.records:
        raise NoValidRows(f"{path}: no valid trace rows "
                          f"(rejected {dict(result.rejected)})")
    return result


def write_trace(path, records, delimiter: str = ",", header: bool = True) -> None:
    """Write records in the documented five-column format."""
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(delimiter.join(TRACE_COLUMNS) + "\n")
        for r in records:
            fh.write(delimiter.join([
                repr(r.timestamp), r.machine_id, repr(r.cpu_utilisation),
                repr(r.memory_utilisation), repr(r.disk_utilisation)]) + "\n")


def bundled_trace_path():
    """Path of the synthetic trace shipped with the package."""
    return resources.files("fogsched.data") / "synthetic_trace.csv"


def jobs_from_trace(records, base_mips_per_percent: float = DEFAULT_MIPS_PER_PERCENT,
                    data_per_percent: float = DEFAULT_DATA_PER_PERCENT,
                    batch: bool = True) -> list:
    """Derive one job per active trace record.

    cpu demand is cpu_utilisation times base_mips_per_percent; instruction
    length is one second's worth of that demand; data volume scales the same
    utilisation.  Records with zero cpu utilisation (idle machines) yield no
    job, since a job's demand must be positive.  Arrival times come from the
    record timestamps unless batch is set, which forces them all to zero.
    """
    records = list(records)
    if not records:
        raise EmptyTrace("jobs_from_trace needs records")
    if base_mips_per_percent <= 0 or data_per_percent <= 0:
        raise ValueError("scale factors must be > 0")
    jobs = []
    for idx, rec in enumerate(records):
        if rec.cpu_utilisation == 0:
            continue
        demand = rec.cpu_utilisation * base_mips_per_percent
        jobs.append(JobSpec(
            id=f"j{idx:04d}",
            cpu_demand=demand,
            length=demand,
            data_volume=rec.cpu_utilisation * data_per_percent,
            arrival_time=0.0 if batch else rec.timestamp,
        ))
    if not jobs:
        raise EmptyTrace("every record had zero cpu utilisation")
    return jobs


def scale_load(jobs, multiplier: float) -> list:
    """Rescale every job's cpu demand and length by the load multiplier.

    The job-set mean demand scales by exactly the multiplier and relative
    ordering is preserved; data volumes and arrivals are untouched.
    """
    jobs = list(jobs)
    if not jobs:
        raise EmptyTrace("scale_load needs jobs")
    if multiplier <= 0:
        raise ValueError("multiplier must be > 0")
    if multiplier == 1.0:
        return list(jobs)
    return [
        replace(j, cpu_demand=j.cpu_demand * multiplier,
                length=j.length * multiplier)
        for j in jobs
    ]


def _check_range(name: str, rng, minimum: float) -> None:
    lo, hi = rng
    if lo > hi or lo < minimum:
        raise InvalidRange(f"{name} range {rng} is invalid")


def synth_jobs(n: int, demand_range, length_range, data_range, seed: int) -> list:
    """Seeded uniform job generator for trace-free runs and tests."""
    if n <= 0:
        raise InvalidRange("n must be > 0")
    _check_range("demand", demand_range, minimum=1e-12)
    _check_range("length", length_range, minimum=1e-12)
    _check_range("data", data_range, minimum=0.0)
    rng = random.Random(seed)
    return [
        JobSpec(
            id=f"s{i:04d}",
            cpu_demand=rng.uniform(*demand_range),
            length=rng.uniform(*length_range),
            data_volume=rng.uniform(*data_range),
        )
        for i in range(n)
    ]
