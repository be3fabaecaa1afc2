"""Exception hierarchy shared across the package."""


class CtqwalkError(Exception):
    """Base class for all errors raised by ctqwalk."""


class DefectOutOfGrid(CtqwalkError):
    """The defect site has no room for both of its bonds on the grid."""


class SiteOutOfGrid(CtqwalkError):
    """A requested site index lies outside the finite grid."""


class GridTooSmall(CtqwalkError):
    """The grid cannot hold the requested state without truncating its tails."""


class GridMismatch(CtqwalkError):
    """Operands live on different site grids."""


class ConvergenceFailure(CtqwalkError):
    """The polynomial expansion hit its term cap before reaching tolerance."""


class LatticeTooSmall(CtqwalkError):
    """Probability reached the boundary guard band; the run is not trustworthy."""


class NegativeVariance(CtqwalkError):
    """The position variance came out negative beyond roundoff; numerics bug."""


class InsufficientSamples(CtqwalkError):
    """Too few samples inside the requested fit window."""


class MismatchedSeries(CtqwalkError):
    """Two time series cannot be compared (different times or initial states)."""


class EmptyResult(CtqwalkError):
    """A plot or table was requested for a result with no data."""


class UsageError(CtqwalkError):
    """Bad command-line or config-file input."""


class ConflictError(UsageError):
    """A flag contradicts the chosen subcommand."""


class VerificationError(CtqwalkError):
    """A manifest digest does not match the file on disk."""
