"""Exceptions shared across modules."""


class SemanticFailure(Exception):
    """An inference step was refused; ``witness`` is a concrete gamble when known."""

    def __init__(self, message, witness=None, certificate=None):
        super().__init__(message)
        self.witness = witness
        self.certificate = certificate


class NoRespect(SemanticFailure):
    """The assessment together with the background is not closable."""


class NotClosable(SemanticFailure):
    """The assessment has no confusion-free deductive closure."""


class ConfusedInput(SemanticFailure):
    """An operation that needs a confusion-free input received a confused one."""


class Confused(SemanticFailure):
    """A constructed background would be confused (e.g. a bad symmetry monoid)."""


class SureLoss(SemanticFailure):
    """A lower prevision incurs a sure loss."""


class StrategyNotSound(ValueError):
    """A confusion-removal strategy that does not preserve closedness."""


class ConditionViolated(ValueError):
    """An input does not meet the framework condition an operation requires."""


class CapExceeded(ValueError):
    """Monoid closure grew past the requested cap."""


class Unbounded(ValueError):
    """A supremum is +∞; for prevision extraction this flags a non-compatible model."""
