from typing import Any, Dict, Optional


class SimulationError(Exception):
    """Base class for every error raised by the simulator.

    Attributes:
        message (str): Explanation of the error
        details (dict, optional): Quantities that characterise the failure
            (norms, shapes, thresholds, config field names)
        original_exception (Exception, optional): The original exception caught
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        original_exception: Optional[Exception] = None,
    ):
        self.message = message
        self.details = details or {}
        self.original_exception = original_exception

        detailed_message = f"{message}"
        if self.details:
            rendered = ", ".join(f"{k}={v}" for k, v in self.details.items())
            detailed_message += f" ({rendered})"
        if original_exception is not None:
            detailed_message += f"\nOriginal error: {str(original_exception)}"

        super().__init__(detailed_message)


class ZeroVector(SimulationError):
    """Raised when a vector that must be nonzero (pilot, projector axis) vanishes."""


class DimensionMismatch(SimulationError):
    """Raised when channel, pilot and attack dimensions disagree."""


class NonFiniteInput(SimulationError):
    """Raised when an array handed to the simulator contains NaN or Inf."""


class ZeroEstimate(SimulationError):
    """Raised when a channel estimate is too small to build a precoder from."""


class DegenerateLink(SimulationError):
    """Raised when the precoder delivers no signal to the UE, so beta is undefined."""


class BothZero(SimulationError):
    """Raised when neither the UE nor the eavesdropper receives any power."""


class CollinearChannels(SimulationError):
    """Raised when the UE channel lies in the eavesdropper subspace.

    No beam with nonzero UE power can keep the eavesdropper power at zero.
    """


class ConfigError(SimulationError):
    """Raised for unreadable or invalid scenario configurations."""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs):
        self.field = field
        if field is not None:
            details = dict(kwargs.pop("details", None) or {})
            details.setdefault("field", field)
            kwargs["details"] = details
        super().__init__(message, **kwargs)


class ResultsIOError(SimulationError):
    """Raised when results cannot be written to their destination."""

    def __init__(self, message: str, path: str, **kwargs):
        self.path = path
        details = dict(kwargs.pop("details", None) or {})
        details.setdefault("path", path)
        super().__init__(message, details=details, **kwargs)
