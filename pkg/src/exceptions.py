class RicciFlowError(Exception):
    pass


class InputError(RicciFlowError, ValueError):
    pass


class NumericalError(RicciFlowError, RuntimeError):
    pass


class InvalidGraphError(InputError):
    pass


class InvalidMetricError(InputError):
    pass


class InvalidKernelError(InputError):
    pass


class GraphFormatError(InputError):
    line_number: int

    def __init__(self, message: str, line_number: int = 0) -> None:
        if line_number:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class UnknownVertexError(InputError):
    pass


class DegenerateMetricError(InputError):
    pass


class EpsilonTooLargeError(InputError):
    pass


class NotATreeError(InputError):
    pass


class NotUniformMeasureError(InputError):
    pass


class UnknownFigureError(InputError):
    pass


class EigenConvergenceError(NumericalError):
    pass


class SpectralGapError(NumericalError):
    pass


class PerronVectorError(NumericalError):
    pass


class TransportError(NumericalError):
    pass


class StepSizeTooLargeError(NumericalError):
    pass


class DisconnectedAfterSurgeryError(NumericalError):
    pass
