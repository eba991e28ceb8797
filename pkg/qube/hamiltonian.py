"""
Ising-style Hamiltonians used as the energy metric of the cube.

Position energies couple squared displacement components of cubie pairs
along the same axis; spin energies couple squared spin eigenvalues. With
non-negative symmetric J and strictly positive B each energy is zero exactly
on its ground-state condition.
"""
import logging
import os
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Dict, Optional, Union

import numpy as np

from config import DEFAULT_PREMIUM
from qube.cube_core import NUM_CORNERS, NUM_EDGES, CubeState
from qube.errors import CoefficientError, ConfigError, InvalidPhaseError

logger = logging.getLogger(__name__)

Number = Union[int, float]


class PhaseHamiltonian(IntEnum):
    """The four phase energies, valued by the phase that minimizes them."""
    EDGE_SPIN = 1
    CORNER_SPIN = 2
    CORNER_POSITION = 3
    EDGE_POSITION = 4

    @classmethod
    def for_phase(cls, phase: int) -> "PhaseHamiltonian":
        try:
            return cls(phase)
        except ValueError:
            raise InvalidPhaseError(phase) from None


J_MODES = ("diagonal", "uniform", "file")
B_MODES = ("ones", "file")

# Config key suffix -> (attribute, expected shape)
COEFFICIENT_FILES: Dict[str, tuple] = {
    "J.edges.file": ("j_edges", (NUM_EDGES, NUM_EDGES)),
    "J.corners.file": ("j_corners", (NUM_CORNERS, NUM_CORNERS)),
    "B.edges.file": ("b_edges", (NUM_EDGES, 3)),
    "B.corners.file": ("b_corners", (NUM_CORNERS, 3)),
    "B.edge_spin.file": ("b_edge_spin", (NUM_EDGES,)),
    "B.corner_spin.file": ("b_corner_spin", (NUM_CORNERS,)),
}


def _as_exact(array) -> np.ndarray:
    """Keep integer-valued coefficients as int64 so energies stay exact."""
    array = np.asarray(array)
    if array.dtype.kind in "iu":
        return array.astype(np.int64)
    array = array.astype(np.float64)
    if np.all(np.isfinite(array)) and np.all(array == np.round(array)):
        return array.astype(np.int64)
    return array


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    """
    Couplings J and fields B for the four Hamiltonians.

    Attributes:
        j_edges: 12x12 symmetric edge coupling (position and spin)
        j_corners: 8x8 symmetric corner coupling (position and spin)
        b_edges: 12x3 per-cubie, per-axis edge position field
        b_corners: 8x3 per-cubie, per-axis corner position field
        b_edge_spin: per-edge spin field
        b_corner_spin: per-corner spin field
    """
    j_edges: np.ndarray
    j_corners: np.ndarray
    b_edges: np.ndarray
    b_corners: np.ndarray
    b_edge_spin: np.ndarray
    b_corner_spin: np.ndarray

    def __post_init__(self):
        for attr, _ in COEFFICIENT_FILES.values():
            value = _as_exact(getattr(self, attr))
            object.__setattr__(self, attr, value)
            value.setflags(write=False)
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            CoefficientError: On a wrong shape, an asymmetric or negative J,
                or a non-positive B entry
        """
        for attr, shape in COEFFICIENT_FILES.values():
            value = getattr(self, attr)
            if value.shape != shape:
                raise CoefficientError(f"{attr} has shape {value.shape}, expected {shape}")
            if not np.all(np.isfinite(value)):
                raise CoefficientError(f"{attr} contains non-finite values")
        for attr in ("j_edges", "j_corners"):
            value = getattr(self, attr)
            if not np.array_equal(value, value.T):
                raise CoefficientError(f"{attr} is not symmetric")
            if np.any(value < 0):
                raise CoefficientError(f"{attr} has negative couplings")
        for attr in ("b_edges", "b_corners", "b_edge_spin", "b_corner_spin"):
            if np.any(getattr(self, attr) <= 0):
                raise CoefficientError(f"{attr} must be strictly positive")

    @classmethod
    def default(cls) -> "CoefficientSet":
        """Diagonal J, all-ones B."""
        return cls(
            j_edges=np.eye(NUM_EDGES, dtype=np.int64),
            j_corners=np.eye(NUM_CORNERS, dtype=np.int64),
            b_edges=np.ones((NUM_EDGES, 3), dtype=np.int64),
            b_corners=np.ones((NUM_CORNERS, 3), dtype=np.int64),
            b_edge_spin=np.ones(NUM_EDGES, dtype=np.int64),
            b_corner_spin=np.ones(NUM_CORNERS, dtype=np.int64),
        )

    @classmethod
    def uniform(cls) -> "CoefficientSet":
        """All-to-all unit couplings, all-ones B."""
        base = cls.default()
        return cls(
            j_edges=np.ones((NUM_EDGES, NUM_EDGES), dtype=np.int64),
            j_corners=np.ones((NUM_CORNERS, NUM_CORNERS), dtype=np.int64),
            b_edges=base.b_edges,
            b_corners=base.b_corners,
            b_edge_spin=base.b_edge_spin,
            b_corner_spin=base.b_corner_spin,
        )

    @classmethod
    def from_config(cls, j_mode: str = "diagonal", b_mode: str = "ones",
                    files: Optional[Dict[str, str]] = None) -> "CoefficientSet":
        """
        Build coefficients from the run-config modes.

        Args:
            j_mode: ``diagonal``, ``uniform`` or ``file``
            b_mode: ``ones`` or ``file``
            files: Config key (e.g. ``"J.edges.file"``) to matrix path

        Returns:
            Validated CoefficientSet
        """
        files = files or {}
        if j_mode not in J_MODES:
            raise ConfigError(f"J.mode must be one of {J_MODES}, got {j_mode!r}")
        if b_mode not in B_MODES:
            raise ConfigError(f"B.mode must be one of {B_MODES}, got {b_mode!r}")

        base = cls.uniform() if j_mode == "uniform" else cls.default()
        values = {attr: getattr(base, attr) for attr, _ in COEFFICIENT_FILES.values()}
        for key, (attr, shape) in COEFFICIENT_FILES.items():
            wanted = (j_mode == "file") if key.startswith("J.") else (b_mode == "file")
            if not wanted:
                continue
            path = files.get(key)
            if not path:
                raise ConfigError(f"{key} is required when {key[0]}.mode = file")
            values[attr] = load_matrix(path, shape)
        logger.info(f"Coefficients: J.mode={j_mode}, B.mode={b_mode}")
        return cls(**values)


def load_matrix(path: str, shape: tuple) -> np.ndarray:
    """Read a whitespace-separated numeric matrix (or vector) from disk."""
    if not os.path.exists(path):
        raise ConfigError(f"Coefficient file not found: {path}")
    try:
        matrix = np.loadtxt(path, dtype=np.float64, ndmin=len(shape))
    except ValueError as e:
        raise ConfigError(f"Cannot parse coefficient file {path}: {e}") from e
    if matrix.shape != shape:
        raise CoefficientError(f"{path} has shape {matrix.shape}, expected {shape}")
    return matrix


@lru_cache(maxsize=1)
def default_coefficients() -> CoefficientSet:
    return CoefficientSet.default()


def _position_energy(disp: np.ndarray, j: np.ndarray, b: np.ndarray) -> Number:
    n2 = disp * disp
    coupling = np.einsum("il,ij,jl->", n2, j, n2)
    return coupling + np.sum(b * n2)


def _spin_energy(spin: np.ndarray, j: np.ndarray, b: np.ndarray) -> Number:
    s2 = spin * spin
    return s2 @ j @ s2 + b @ s2


def energy(state: CubeState, which: PhaseHamiltonian, coeffs: Optional[CoefficientSet] = None) -> Number:
    """
    Energy of one phase Hamiltonian.

    Args:
        state: Cube state
        which: Phase Hamiltonian to evaluate
        coeffs: Coefficients, default diagonal J and unit B

    Returns:
        Non-negative energy, an int when the coefficients are integral
    """
    coeffs = coeffs or default_coefficients()
    which = PhaseHamiltonian(which)
    if which is PhaseHamiltonian.EDGE_SPIN:
        value = _spin_energy(state.spin[:NUM_EDGES], coeffs.j_edges, coeffs.b_edge_spin)
    elif which is PhaseHamiltonian.CORNER_SPIN:
        value = _spin_energy(state.spin[NUM_EDGES:], coeffs.j_corners, coeffs.b_corner_spin)
    elif which is PhaseHamiltonian.CORNER_POSITION:
        value = _position_energy(state.disp[NUM_EDGES:], coeffs.j_corners, coeffs.b_corners)
    else:
        value = _position_energy(state.disp[:NUM_EDGES], coeffs.j_edges, coeffs.b_edges)
    return value.item() if hasattr(value, "item") else value


def total_energy(state: CubeState, coeffs: Optional[CoefficientSet] = None) -> Number:
    return sum(energy(state, which, coeffs) for which in PhaseHamiltonian)


def energies(state: CubeState, coeffs: Optional[CoefficientSet] = None) -> Dict[PhaseHamiltonian, Number]:
    return {which: energy(state, which, coeffs) for which in PhaseHamiltonian}


def reward(next_state: CubeState, which: PhaseHamiltonian, coeffs: Optional[CoefficientSet] = None,
           premium: float = DEFAULT_PREMIUM) -> float:
    """Negative energy, plus ``premium`` when the phase ground state is reached."""
    e = energy(next_state, which, coeffs)
    return float(premium) if e == 0 else -float(e)


def is_ground(state: CubeState, which: PhaseHamiltonian, coeffs: Optional[CoefficientSet] = None) -> bool:
    return energy(state, which, coeffs) == 0


def ground_condition(state: CubeState, which: PhaseHamiltonian) -> bool:
    """Coefficient-free ground predicate: every relevant eigenvalue is zero."""
    which = PhaseHamiltonian(which)
    if which is PhaseHamiltonian.EDGE_SPIN:
        return not state.spin[:NUM_EDGES].any()
    if which is PhaseHamiltonian.CORNER_SPIN:
        return not state.spin[NUM_EDGES:].any()
    if which is PhaseHamiltonian.CORNER_POSITION:
        return not state.disp[NUM_EDGES:].any()
    return not state.disp[:NUM_EDGES].any()


def prefix_ground(state: CubeState, phase: int) -> bool:
    """True when the ground conditions of every phase before ``phase`` hold."""
    return all(ground_condition(state, PhaseHamiltonian(k)) for k in range(1, phase))
