"""Exception hierarchy shared by every module."""


class LawvereError(Exception):
    """Base class for all errors raised by this package."""


class NotFinite(LawvereError):
    """A finite enumeration was requested from a lazy (possibly infinite) set."""


class TruncationTooSmall(LawvereError):
    pass


class Unsupported(LawvereError):
    pass


class LawViolation(LawvereError):
    """Raised when a structure fails a law it is required to satisfy.

    ``report`` carries the :class:`~lawvere.clone.LawReport` with the witness.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PowerMissing(LawvereError):
    pass


class NoPresentation(LawvereError):
    pass


class NonPreserving(LawvereError):
    pass


class NotDistributive(LawvereError):
    pass


class ArityOverflow(LawvereError):
    pass


class NormalizerNonIdempotent(LawvereError):
    pass


class SearchSpaceTooLarge(LawvereError):
    pass


class NotFound(LawvereError):
    """A bounded search for a universal arrow came back empty."""


class PresentationError(LawvereError):
    """Problem in a theory, morphism or functor file; carries a source position."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class TheorySyntaxError(PresentationError):
    pass


class ArityError(PresentationError):
    pass


class UnknownSemantics(PresentationError):
    pass
