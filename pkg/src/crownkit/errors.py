"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`CrownError`.
The CLI maps :class:`InvalidElement` to exit code 3 and every
:class:`DomainViolation` to exit code 4.
"""


class CrownError(Exception):
    pass


class InvalidElement(CrownError, ValueError):
    """Input is not a valid group element (non-finite, singular, not unimodular)."""


class InvalidCoordinates(InvalidElement):
    """Tube coordinates or symmetric points violating their own invariants."""


class DimensionError(CrownError, ValueError):
    pass


class InvalidRank(CrownError, ValueError):
    pass


class InternalError(CrownError, RuntimeError):
    pass


class DomainViolation(CrownError):
    """Input is well-formed but outside the domain an operation is defined on."""


class IllConditioned(DomainViolation):
    pass


class EllipticObstruction(DomainViolation):
    pass


class NotAnAlgebra(DomainViolation):
    pass


class NotInNA(DomainViolation):
    pass


class NotInTube(DomainViolation):
    pass


class DegeneratePivot(DomainViolation):
    pass


class NotOnSlice(DomainViolation):
    pass


class DegenerateAction(DomainViolation):
    pass


class UnknownSpace(DomainViolation, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class OutOfRange(DomainViolation):
    pass
