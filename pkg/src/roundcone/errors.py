"""Exception hierarchy shared by every roundcone module."""


class RoundConeError(ValueError):
    """Base class for all errors raised by roundcone."""


class DimensionError(RoundConeError):
    """Vectors or subspaces of incompatible dimension were combined."""


class RegimeError(RoundConeError):
    """An operation was called outside the parameter regime where it is defined."""


class WitnessSearchError(RegimeError):
    """The root search behind a witness construction did not find a valid parameter."""
