"""
Exception types raised by the QUBE solver.
"""
from typing import Optional


class QubeError(Exception):
    """Base class for every error raised by the solver."""


class InvalidPhaseError(QubeError, ValueError):
    """Phase index outside 1..4."""

    def __init__(self, phase):
        super().__init__(f"Invalid phase {phase!r}; expected one of 1, 2, 3, 4")
        self.phase = phase


class MoveParseError(QubeError, ValueError):
    """Unknown or malformed move token."""

    def __init__(self, token: str, index: Optional[int] = None):
        where = f" at position {index}" if index is not None else ""
        super().__init__(f"Cannot parse move {token!r}{where}")
        self.token = token
        self.index = index


class MacroError(QubeError, ValueError):
    """Macro expansion requested for a plain move."""


class CoefficientError(QubeError, ValueError):
    """Hamiltonian coefficients with the wrong shape, sign or symmetry."""


class DimensionError(QubeError, ValueError):
    """Network or observation dimensions that do not line up."""


class ModelFormatError(QubeError, ValueError):
    """Model file that cannot be decoded."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class NonFiniteError(QubeError, ArithmeticError):
    """Loss or reward turned NaN/inf during training."""


class InvariantViolation(QubeError, AssertionError):
    """A phase action broke the ground state of an earlier phase."""


class ConfigError(QubeError, ValueError):
    """Bad run configuration."""
