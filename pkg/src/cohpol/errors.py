"""Exception types raised across the package."""


class CohpolError(Exception):
    """Base class for all package errors."""


class ZeroNormState(CohpolError):
    """The superposition has (numerically) zero norm and cannot be normalized."""


class UnnormalizedState(CohpolError):
    """An operation that needs a normalized state received an unnormalized one."""


class UnsupportedBranchCount(CohpolError):
    """The operation is only defined for a specific number of branches."""


class TruncationTooSevere(CohpolError):
    """The Fock truncation discards more probability than allowed."""


class DimensionMismatch(CohpolError):
    """Fock vectors or operators with different truncations were combined."""


class QuadratureTooCoarse(CohpolError):
    """Refining the sphere quadrature changed the result beyond tolerance."""


class GridTooSmall(CohpolError):
    """The phase-space grid does not capture the Wigner function accurately."""


class StateFormatError(CohpolError, ValueError):
    """A state interchange file could not be parsed."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)


class OracleSelfCheckFailed(CohpolError):
    """The truncated-basis oracle failed its own operator identities."""
