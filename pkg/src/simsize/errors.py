"""Exception types raised by the fitting engine and the adaptive drivers."""

from __future__ import annotations


class SeparationError(ValueError):
    """Record set contains only successes or only failures; the probit MLE
    diverges and the caller should widen its sampling window."""


class SeparationRunError(RuntimeError):
    """Separation persisted through the widened-batch retries of a run."""


class SimulatorReturnError(RuntimeError):
    """A simulator returned something other than a plain Boolean."""

    def __init__(self, message: str, *, size: int, seed: int, natural_v=None):
        super().__init__(message)
        self.size = size
        self.seed = seed
        self.natural_v = natural_v


class SimulatorArityError(TypeError):
    """Simulator arity (size-only vs size+v) does not match the driver."""


class ImpossibleSizeError(RuntimeError):
    """The fitted size estimate exceeds the configured impossibility bound."""

    def __init__(self, message: str, *, imp_nn, estimate):
        super().__init__(message)
        self.imp_nn = imp_nn
        self.estimate = estimate
