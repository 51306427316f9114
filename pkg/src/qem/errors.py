"""Exception types shared across the package.

Every error raised deliberately by this package derives from :class:`QemError`,
so callers can distinguish "the input violates a documented precondition" from
genuine bugs.  Messages should name the quantity that failed and its value.
"""


class QemError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QemError):
    """A point lies outside the admissible domain of a chart or metric."""


class SingularExpr(QemError):
    """A closed-form expression is not real-analytic at the evaluation point
    (division by zero, log/sqrt of a non-positive value, fractional power of a
    non-positive base, ...)."""


class DegenerateMetric(QemError):
    """The evaluated metric matrix is singular or not positive definite."""


class ZeroGradient(QemError):
    """An operation requiring a non-critical potential met |grad f| ~ 0."""


class ZeroDenominator(QemError):
    """A closed-form quotient was requested at a (near-)zero denominator."""


class QSingular(QemError):
    """The common denominator Q of the reduced first-order system is (near)
    zero, so the right-hand side is not defined there."""


class DegenerateTriple(QemError):
    """A principal-curvature triple violates distinctness or has P ~ 0."""


class ConstraintViolation(QemError):
    """Supplied parameters violate a structural constraint; the message names
    the constraint that failed."""


class EmptyDomain(QemError):
    """The requested parameter values leave no admissible coordinate domain."""


class InconsistentK(QemError):
    """The fiber curvature reconstructed along a trajectory is not constant
    within tolerance."""
