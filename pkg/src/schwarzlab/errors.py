"""Exception types raised across the package."""


class SchwarzError(Exception):
    """Base class for all numerical failures raised by schwarzlab."""


class VelocityVanishes(SchwarzError):
    """First derivative of rho dropped below the admissible threshold.

    ``time`` is set when the failure happens during an integration run.
    """

    def __init__(self, message, time=None, partial=None):
        super().__init__(message)
        self.time = time
        self.partial = partial


class PoleCrossing(SchwarzError):
    """Denominator of a fractional linear map is (numerically) zero."""


class IndexOutOfStencil(SchwarzError):
    pass


class ExponentOverflow(SchwarzError):
    pass


class NegativeArgument(SchwarzError):
    """rho_dot / mu is not positive, so u = ln(rho_dot / mu) is undefined."""


class StepLimitExceeded(SchwarzError):
    def __init__(self, message, time=None, partial=None):
        super().__init__(message)
        self.time = time
        self.partial = partial


class BlowUp(SchwarzError):
    """|rho| or |rho_dot| exceeded the runaway guard."""

    def __init__(self, message, time=None, partial=None):
        super().__init__(message)
        self.time = time
        self.partial = partial
