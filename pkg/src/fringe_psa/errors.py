"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`FringePsaError`. The CLI prints the class name as the diagnostic,
so class names are part of the public interface.
"""


class FringePsaError(Exception):
    """Base class for all library errors."""


class InvalidOmega0(FringePsaError, ValueError):
    pass


class DerivativeOutOfRange(FringePsaError, ValueError):
    """A phase increment of the carrier left the open interval (0, pi)."""

    def __init__(self, index, increment):
        self.index = int(index)
        self.increment = float(increment)
        super().__init__(
            f"phase increment {self.increment!r} rad between samples "
            f"{self.index} and {self.index + 1} is outside (0, pi)"
        )


class LengthMismatch(FringePsaError, ValueError):
    pass


class InvalidParams(FringePsaError, ValueError):
    pass


class NegativeDensity(FringePsaError, ValueError):
    pass


class TooFewSteps(FringePsaError, ValueError):
    pass


class NonpositiveG(FringePsaError, ValueError):
    pass


class InfeasibleConstraints(FringePsaError, ValueError):
    pass


class GridTooCoarse(FringePsaError, ValueError):
    pass


class EmptySpectrum(FringePsaError, ValueError):
    pass


class ZeroNormalizer(FringePsaError, ArithmeticError):
    pass


class LowAmplitude(FringePsaError, ArithmeticError):
    """The analytic signal is too small for its argument to mean anything."""


class NotLinearReference(FringePsaError, TypeError):
    pass


class ZeroSum(FringePsaError, ArithmeticError):
    pass


class NonpositiveInputs(FringePsaError, ValueError):
    pass


class ConfigError(FringePsaError, ValueError):
    pass
