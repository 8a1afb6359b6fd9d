"""Exception hierarchy shared by every holologic module."""


class HoloError(Exception):
    """Base class for domain errors raised by holologic."""


class DimensionError(HoloError, ValueError):
    """Operands live in spaces of different dimension, or an index is out of range."""


class DegreeOverflowError(HoloError, ValueError):
    """A result would exceed the truncation degree of a state."""

    def __init__(self, index, max_degree):
        self.index = tuple(index)
        self.max_degree = max_degree
        super().__init__(
            f"multi-index {self.index} has degree {sum(self.index)} > max_degree {max_degree}"
        )


class ZeroStateError(HoloError, ValueError):
    """An operation that needs a nonzero state received the zero polynomial."""


class DivergenceError(HoloError, ArithmeticError):
    """A simulation or integral produced non-finite values or non-decaying tails."""

    def __init__(self, message, step=None):
        self.step = step
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)


class SupportError(HoloError, ValueError):
    """KL divergence requested where p is not absolutely continuous w.r.t. q."""


class PoleError(HoloError, ValueError):
    """A lower hypergeometric parameter hits a pole of the Pochhammer symbol."""


class AliasingError(HoloError, ValueError):
    """Too few contour nodes to resolve the requested polynomial degree."""


class ComplexInputError(HoloError, ValueError):
    """An expectation value fed to a real-valued consumer has an imaginary part."""


class UplError(HoloError):
    """A UPL instruction failed; ``instruction`` is its 1-based index."""

    def __init__(self, instruction, message):
        self.instruction = instruction
        super().__init__(f"L{instruction}: {message}")
