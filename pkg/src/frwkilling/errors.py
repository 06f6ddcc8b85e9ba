"""Exception hierarchy shared by all frwkilling modules."""


class FrwKillingError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FrwKillingError, ValueError):
    """A time coordinate lies outside the scale-factor profile's domain."""


class SingularPointError(FrwKillingError, ValueError):
    """A chart point has no image under the requested chart transition."""


class ChartProfileMismatch(FrwKillingError, ValueError):
    """The chart (or catalog field) is not available for the given profile."""


class StepTooLarge(FrwKillingError, ValueError):
    """A finite-difference step exceeds the admissible maximum."""


class RankUnstable(FrwKillingError, ArithmeticError):
    """A singular value sits too close to the rank threshold to decide."""


class ChartExitError(FrwKillingError, ValueError):
    """A transport path leaves the chart domain."""


class ZeroFieldError(FrwKillingError, ValueError):
    """The zero combination of Killing fields has no causal character."""


class WitnessNotFound(FrwKillingError, RuntimeError):
    """The causal scan failed to locate a non-timelike point."""


class ConfigError(FrwKillingError, ValueError):
    """Malformed profile text, config file or command-line option."""
