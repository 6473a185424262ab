"""Exception types shared across the package."""


class OpineqError(Exception):
    """Base class for all library errors."""


class InvalidMatrix(OpineqError):
    """Input is not a usable symmetric matrix (shape, finiteness, asymmetry)."""


class ShapeError(OpineqError):
    """Dimension mismatch between operands."""


class DomainViolation(OpineqError):
    """A spectrum point falls outside the domain of the scalar function."""


class NotPositiveDefinite(OpineqError):
    """Strict positivity was required but does not hold."""


class UnknownFunction(OpineqError):
    """Catalog lookup for a name that is not registered."""


class BadParameter(OpineqError):
    """Parameter outside its admissible range."""


class NonPositiveFunction(OpineqError):
    """The scalar function must be strictly positive on the interval."""


class NonPositiveConstant(OpineqError):
    """A ratio constant that must be positive is not."""


class SpectrumNotEnclosed(OpineqError):
    """User-supplied interval does not contain the spectrum."""


class DegenerateInterval(OpineqError):
    """m == M: the chord through the interval endpoints is undefined."""


class NotStrictlyConvex(OpineqError):
    """The refinement chain needs a strictly positive lower second-derivative bound."""


class SandwichViolated(OpineqError):
    """The condition m*A <= B <= M*A does not hold."""


class ConvergenceError(OpineqError):
    """Iterative eigensolver hit its sweep cap without converging."""
