"""Exception types raised by the library.

Every input-validation failure derives from :class:`K3CorrError` so the CLI
can map it to exit code 2 in one place.
"""


class K3CorrError(ValueError):
    pass


class DegenerateLattice(K3CorrError):
    pass


class OddLattice(K3CorrError):
    pass


class IndefiniteLattice(K3CorrError):
    pass


class ZeroVector(K3CorrError):
    pass


class IsotropicMirror(K3CorrError):
    pass


class InvalidTarget(K3CorrError):
    pass


class NotIndefiniteNonSquare(K3CorrError):
    pass


class InvalidType(K3CorrError):
    pass


class InvalidGamma(K3CorrError):
    pass


class NotCoprime(K3CorrError):
    pass


class IllegalMove(K3CorrError):
    pass


class NotRankOne(K3CorrError):
    pass


class NotReduced(K3CorrError):
    pass


class NotPlusMinusOne(K3CorrError):
    pass


class TypeMismatch(K3CorrError):
    pass


class InvalidInput(K3CorrError):
    pass


class WitnessVerificationFailed(RuntimeError):
    """A constructed witness failed its own verification.

    This signals a bug in the library, never bad input, so it is deliberately
    not a :class:`K3CorrError`.
    """
