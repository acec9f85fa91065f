"""Exception types shared across the package."""


class TwoPhotonError(Exception):
    """Base class for all errors raised by twophoton."""


class ConfigError(TwoPhotonError, ValueError):
    """Invalid or inconsistent experiment configuration."""


class ParseError(ConfigError):
    """Malformed unit string, sweep string or polynomial file."""


class ScanTooCoarse(ConfigError):
    """Too few sweep points per fringe period."""


class NotFringeForm(TwoPhotonError, ValueError):
    """A curve or polynomial is not of the form c0 + c1*cos(...)."""


class QuadratureNotConverged(TwoPhotonError, ArithmeticError):
    """Adaptive node doubling hit its cap before reaching the tolerance."""


class RegimeError(TwoPhotonError, ArithmeticError):
    """A closed form was requested outside the regime where it holds."""
