class ReliabilityError(Exception):
    """Base class for every error raised by the reliability toolkit"""


class ArchitectureError(ReliabilityError, ValueError):
    """An architecture specification is malformed or violates its invariants"""


class ThresholdOutOfRange(ArchitectureError):
    """A majority threshold is below 1 or above the component count"""


class NonPositiveRate(ArchitectureError):
    """A failure rate is zero, negative or not finite"""


class ParseError(ArchitectureError):
    """A "SooN_S/MooN_M" label could not be parsed"""


class SolverError(ReliabilityError):
    """The transient solver cannot produce a result"""


class DegenerateGenerator(SolverError):
    """The uniformization rate is zero on a chain with more than one state"""


class InvalidProbabilityVector(SolverError, ValueError):
    """A probability vector has wrong length, negative mass or does not sum to 1"""


class DomainError(ReliabilityError, ValueError):
    """A closed-form function was called outside its domain"""


class ConfigError(ReliabilityError, ValueError):
    """Configuration values are inconsistent or unknown"""
