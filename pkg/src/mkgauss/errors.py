"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid parameter, size, or domain value."""


class TieError(ValueError):
    """Exact ties in a series where a tie-free sample is required."""


class DegeneracyError(ValueError):
    """Degenerate input: constant sample or unit correlation at positive lag."""


class NumericError(ArithmeticError):
    """Numerical result outside its mathematically valid range beyond tolerance."""


class QuadratureError(RuntimeError):
    """Quadrature failed to converge within the configured tolerance."""
