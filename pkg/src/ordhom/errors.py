"""Exception hierarchy shared by every layer of the engine."""


class OrdhomError(Exception):
    """Base class for all engine errors."""


class DimensionError(OrdhomError, ValueError):
    """Matrix or vector shapes do not fit together."""


class InvariantError(OrdhomError, ValueError):
    """A structural invariant (d^2 = 0, simplicial identities, closure, ...) is violated."""


class RingMismatchError(OrdhomError, ValueError):
    pass


class ExactnessError(OrdhomError):
    """A sequence that must be exact failed its certificate."""


class LiftError(OrdhomError):
    """A snake-lemma lift did not exist; the short sequence was not exact."""


class RefusedComputation(OrdhomError):
    """The input is valid but lies outside what the engine agrees to compute."""


class NotHomologySphere(OrdhomError, ValueError):
    pass
