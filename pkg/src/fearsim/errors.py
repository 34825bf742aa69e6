"""Exception types shared across the simulator."""


class FearSimError(Exception):
    """Base class for all simulator errors."""


class EmptyNeighborSet(FearSimError):
    """An operation that needs at least one neighbor table entry got none."""


class InvalidMaxHop(FearSimError):
    """Hop normalization requires a route-length estimate of at least 1."""


class InvalidNodeCount(FearSimError):
    """The node-count bound needs at least 3 nodes."""


class FailedBeforeTransmit(FearSimError):
    """A transmission was requested from a failed or under-funded node."""


class ConfigError(FearSimError):
    """A scenario configuration violates an invariant."""


class ParseError(ConfigError):
    """A config file could not be parsed; carries the offending line."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
