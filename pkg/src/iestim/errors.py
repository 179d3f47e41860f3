"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class ConfigError(ValueError):
    """Experiment or learner configuration cannot be satisfied."""


class SizeCapError(ValueError):
    """Instance exceeds a brute-force or generator size cap."""


class ProtocolAbort(RuntimeError):
    """A learner emitted an invalid query; carries the partial transcript."""

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript
