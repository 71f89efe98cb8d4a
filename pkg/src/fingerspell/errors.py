"""Exception types shared across the toolkit.

File-system failures (unwritable paths, missing files) are reported with the
builtin OSError/IOError; everything domain-specific gets a named class here so
callers can distinguish bad data from bad code.
"""


class FingerspellError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(FingerspellError):
    """An operation that needs at least one element received none."""


class DegenerateHand(FingerspellError):
    """All landmarks coincide; the frame carries no gesture information."""


class ParseError(FingerspellError):
    """A data file is malformed. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InsufficientClassSamples(FingerspellError):
    """A class has too few samples to split. Names the class."""

    def __init__(self, letter: str, count: int):
        super().__init__(f"class {letter} has {count} sample(s), need at least 2")
        self.letter = letter
        self.count = count


class PrototypeSeparationFailure(FingerspellError):
    """Synthetic prototypes could not be separated in feature space."""


class DimensionMismatch(FingerspellError):
    """Array shapes do not chain with the model layout."""


class EmptyDataset(FingerspellError):
    """Training was asked to run on zero samples."""


class AllFramesDegenerate(FingerspellError):
    """Every frame in the training set was degenerate."""


class FormatError(FingerspellError):
    """A weight file violates the documented format."""


class LengthMismatch(FingerspellError):
    """Paired sequences have different lengths."""


class DomainError(FingerspellError):
    """A numeric argument is outside its documented domain."""
