"""Exception types shared across the package.

Precondition violations raise subclasses of IntPointsError; the CLI maps
them to exit code 2.  Search-side outcomes that carry partial results
(Exhausted) keep the results on the exception object.
"""


class IntPointsError(Exception):
    """Base class for all package errors."""


class InvalidPoint(IntPointsError):
    """Input does not determine a projective point (all coordinates zero)."""


class DimensionMismatch(IntPointsError):
    """Operands live in projective spaces of different dimensions."""


class ParseError(IntPointsError):
    """A text fixture could not be parsed."""


class OnSubscheme(IntPointsError):
    """The point lies on the subscheme, so the requested quantity is infinite."""


class MissingArchLevel(IntPointsError):
    """The archimedean place is constrained but no archimedean level was given."""


class CodimTooSmall(IntPointsError):
    """The avoided set must have codimension at least two for this pipeline."""


class DegreeTooLarge(IntPointsError):
    """The divisor part must have degree at most two for this pipeline."""


class BadModulus(IntPointsError):
    """Congruence modulus contains 2 or a bad-reduction prime."""


class SingularFiber(IntPointsError):
    """The requested fiber parameter is a root of the discriminant."""


class SectionPole(IntPointsError):
    """The section has a pole at the requested fiber parameter."""


class DegenerateSection(IntPointsError):
    """Group-law multiple of the section is undefined (torsion as a function)."""


class SingularAtP(IntPointsError):
    """The conic is singular at the given point, so no parametrization exists."""


class SearchError(IntPointsError):
    """Base class for search-pipeline failures."""


class IntersectsD(SearchError):
    """The curve meets the set that it was required to avoid."""


class BaseNotIntegral(SearchError):
    """The seed point fails verification at the supplied levels."""


class TorsionGenerator(SearchError):
    """The supplied Mordell-Weil generator is a torsion point."""


class TooManyPunctures(SearchError):
    """More than two places of the curve lie on the divisor part."""


class BadPunctureCount(SearchError):
    """Puncture count does not match the requested search mode."""


class IrrationalPunctures(SearchError):
    """The punctures are conjugate irrational points; reparametrization refused."""


class UnitsFinite(SearchError):
    """Two-puncture search needs a finite place in S: over Q the unit group is {+-1}."""


class Exhausted(SearchError):
    """Scan cap reached before the requested count; partial results attached."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = tuple(partial)
