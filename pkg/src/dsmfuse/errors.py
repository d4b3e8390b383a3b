"""Exception types raised across the package.

Everything derives from DsmError so callers can catch the whole family;
the CLI maps subfamilies onto exit codes.
"""


class DsmError(Exception):
    """Base class for all errors raised by this package."""


# --- frame / lattice -------------------------------------------------------

class FrameTooLarge(DsmError):
    """Frame exceeds the configured maximum size."""


class EmptyFrame(DsmError):
    """Operation needs at least one hypothesis in the frame."""


class IndexOutOfRange(DsmError):
    """Hypothesis index outside 1..n."""


class FrameMismatch(DsmError):
    """Operands belong to different frames."""


class EmptyArgument(DsmError):
    """Operation is undefined on the empty element."""


class DegenerateModel(DsmError):
    """Model empties the whole lattice, total ignorance included."""


# --- mass functions --------------------------------------------------------

class ZeroTotalMass(DsmError):
    """Mass sums to zero, nothing to normalize."""


class EmptyOperand(DsmError):
    """Set arithmetic needs a nonempty subunitary set."""


class SelectionOutsideSet(DsmError):
    """A selected point falls outside its focal element's set."""


# --- combination rules -----------------------------------------------------

class FewerThanTwoSources(DsmError):
    """Combination needs at least two sources."""


class TotalConflict(DsmError):
    """Sources are fully conflicting, normalization impossible."""


class DegenerateNormalization(DsmError):
    """Every weighted product vanished, nothing to normalize."""


class NotASubset(DsmError):
    """Inclusion degree requires the first element inside the second."""


# --- decision --------------------------------------------------------------

class ModelNotShafer(DsmError):
    """Classical pignistic transform needs pairwise-exclusive hypotheses."""


class EmptyCandidates(DsmError):
    """Decision requested over an empty candidate list."""


# --- neutrosophic ----------------------------------------------------------

class ZeroSum(DsmError):
    """Triple components sum to zero, cannot normalize."""


# --- scenario / CLI --------------------------------------------------------

class ParseError(DsmError):
    """Scenario document could not be parsed."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {column})" if column is not None else ")")
        super().__init__(message + where)


class ValidationError(DsmError):
    """Scenario parsed but failed semantic validation."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
