"""Exception hierarchy shared by every charshift module."""


class CharShiftError(Exception):
    """Base class for all errors raised by charshift."""


class DomainError(CharShiftError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(CharShiftError):
    """A parameter exceeds the desk-scale bound of the simulator."""


class PromiseViolation(CharShiftError):
    """An oracle or instance does not satisfy the promise an algorithm relies on."""


class ShiftMiss(CharShiftError):
    """A sampled run produced no verified answer; the caller may retry."""


class UnresolvedError(CharShiftError):
    """An algorithm exhausted its retry budget without a verified answer."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class PromiseWarning(UserWarning):
    """Issued when a heuristic procedure runs on an instance outside its promise."""
