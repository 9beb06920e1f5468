"""Exception types for numerical failures surfaced to callers and the CLI."""


class NumericsError(RuntimeError):
    """Base class for numerical failures (quadrature, root bracketing)."""


class QuadratureError(NumericsError):
    """Adaptive quadrature failed to converge within its panel budget."""


class BracketingError(NumericsError):
    """Root scan found no sign change in the searched interval."""
