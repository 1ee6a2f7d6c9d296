import logging


class ErrorLogger:
    """Logging facade used by every simulator module."""

    def __init__(self, name: str = __name__):
        self.logger = logging.getLogger(name)

    def log_error(self, message: str, exception: Exception) -> None:
        """Log an error message with exception details."""
        self.logger.error("%s: %s", message, str(exception))

    def log_trial_failure(self, trial_index: int, exception: Exception) -> None:
        """Log a trial that raised a simulation error; the campaign carries on."""
        self.logger.warning(
            "Trial %d failed with %s: %s",
            trial_index, type(exception).__name__, str(exception)
        )

    def log_warning(self, message: str, *args) -> None:
        self.logger.warning(message, *args)

    def log_info(self, message: str, *args) -> None:
        self.logger.info(message, *args)

    def log_debug(self, message: str, *args) -> None:
        self.logger.debug(message, *args)
