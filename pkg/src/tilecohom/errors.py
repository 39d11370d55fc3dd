"""Shared exception types for the tiling cohomology library."""


class TilingCohomologyError(Exception):
    """Base class for all library-specific errors."""


class NotWellDefined(TilingCohomologyError):
    """A map does not descend to the requested quotient (carries a witness)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotACochainMap(TilingCohomologyError):
    """A square that must commute with coboundaries or self-maps does not."""


class NotInjectiveOnCochains(TilingCohomologyError):
    """A pullback required to be injective on cochains is not."""


class ExactnessFailure(TilingCohomologyError):
    """A sequence fails to be exact; `node` identifies the failing position."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class NotPrimitive(TilingCohomologyError):
    """The substitution matrix has no strictly positive power."""


class NotBorderForcing(TilingCohomologyError):
    """Uncollared complex requested for a rule that does not force its border."""


class HypothesisFailed(TilingCohomologyError):
    """A precondition of a shortcut computation does not hold."""


class Unclassified(TilingCohomologyError):
    """A direct limit could not be put into canonical form."""


class InvalidPath(TilingCohomologyError):
    """A factor-map path label cannot be realized from the given space."""
