"""Exception types shared across the simulator."""


class FogschedError(Exception):
    """Base class for all simulator errors."""


class NonIncreasingTierCapacity(FogschedError):
    """Tier capacities must strictly increase from tier 1 upward."""


class EmptyTier(FogschedError):
    """A tier was declared with zero devices."""


class InvalidDelayRange(FogschedError):
    """A delay range is empty, inverted, or non-positive."""


class CloudDelayNotMaximal(FogschedError):
    """The user-to-cloud delay must exceed every fog user-path delay."""


class UnstableQueue(FogschedError):
    """Arrival rate reached or exceeded the service rate (lambda >= mu)."""


class EmptyCandidateSet(FogschedError):
    """A selection operation received no candidates."""


class EmptyQueue(FogschedError):
    """A scheduling queue was unexpectedly empty."""


class EmptyDeviceSet(FogschedError):
    """A scheduling step received no devices."""


class UnassignedJob(FogschedError):
    """A job is missing from the schedule, or assigned more than once."""


class CapacityViolation(FogschedError):
    """Committed cpu demand on a fog device exceeds its capacity."""


class ZeroSimTime(FogschedError):
    """Network usage needs a positive simulation time."""


class EmptyJobSet(FogschedError):
    """An operation requires at least one job."""


class InvalidSchedule(FogschedError):
    """A schedule violates the single-assignment or capacity constraint."""


class EmptyTrace(FogschedError):
    """No usable records were supplied."""


class NoValidRows(FogschedError):
    """A trace file contained no well-formed rows."""


class InvalidRange(FogschedError):
    """A numeric range for synthetic generation is invalid."""
