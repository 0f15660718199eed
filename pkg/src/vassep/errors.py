"""Exception types shared across the package."""


class VassError(Exception):
    """Base class for all errors raised by vassep."""


class ParseError(VassError):
    pass


class WrongState(VassError):
    def __init__(self, expected, actual):
        super().__init__(f"transition fires from {expected!r}, configuration is at {actual!r}")
        self.expected = expected
        self.actual = actual


class NegativeCounter(VassError):
    def __init__(self, index):
        super().__init__(f"counter {index} would drop below zero")
        self.index = index


class UnknownState(VassError):
    pass


class DimensionMismatch(VassError):
    pass


class PrerequisiteViolated(VassError):
    pass


class OverlappingSupports(VassError):
    pass


class InvalidSchedule(VassError):
    pass


class BudgetExhausted(VassError):
    pass


class RunExists(VassError):
    """Raised by separator searches when the target turns out to be reachable."""

    def __init__(self, run):
        super().__init__(f"target reachable by a run of length {len(run)}")
        self.run = run
