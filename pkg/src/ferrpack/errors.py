"""Exception types shared across the toolkit."""


class FerrpackError(Exception):
    """Base class for all domain errors raised by this package."""


class CapacityError(FerrpackError):
    """An operation was asked to exceed its configured cap.

    The message always names the cap so callers can raise it deliberately.
    """


class RejectionBudgetError(FerrpackError):
    """A rejection sampler ran out of trials.

    Carries ``acceptance_rate``, the fraction of trials accepted before
    giving up, so callers can judge whether a larger budget would help.
    """

    def __init__(self, message: str, acceptance_rate: float):
        super().__init__(message)
        self.acceptance_rate = acceptance_rate


class ChainOverlapError(FerrpackError):
    """Two placements emitted by the diagonal packer overlap.

    This is a construction bug (stride or diagonal-offset reasoning), not a
    recoverable state; the message dumps both placements.
    """


class DegenerateWindowError(FerrpackError):
    """The requested audit window has side length < 1 cell."""
