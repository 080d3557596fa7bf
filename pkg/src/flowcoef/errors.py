"""Exception hierarchy. CLI exit codes hang off the class attribute."""


class FlowcoefError(Exception):
    exit_code = 1


class DimensionMismatch(FlowcoefError, ValueError):
    exit_code = 2


class NotInSpace(FlowcoefError, ValueError):
    """A tuple fails a row, column or total-sum constraint."""
    exit_code = 2


class UnsupportedK(FlowcoefError, ValueError):
    exit_code = 2


class EnumerationTooLarge(FlowcoefError):
    exit_code = 3


class NoValidDirection(FlowcoefError):
    exit_code = 2


class InternalInconsistency(FlowcoefError):
    exit_code = 4


class CertificateFailure(FlowcoefError):
    exit_code = 4


class WitnessInvalid(FlowcoefError):
    exit_code = 4


class NotInDagger(FlowcoefError):
    exit_code = 4


class ConservationViolation(FlowcoefError):
    exit_code = 4


class InvalidNetwork(FlowcoefError, ValueError):
    exit_code = 2
