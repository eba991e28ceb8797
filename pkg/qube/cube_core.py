"""
Cube state space and the per-phase observation encodings.

A state holds the 20 moving cubies only (12 edges, 8 corners); centres carry
no state. Cubie ids and slot ids share the index set 1..20 and slot ``i`` is
the home of cubie ``i``. Internally every per-slot or per-cubie array is
0-based, so index ``k`` refers to slot/cubie ``k + 1``.
"""
import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Tuple

import numpy as np

from qube.errors import InvalidPhaseError

logger = logging.getLogger(__name__)

# --- Cubie taxonomy ---
NUM_CUBIES: int = 20
NUM_EDGES: int = 12
NUM_CORNERS: int = 8
EDGE_IDS: Tuple[int, ...] = tuple(range(1, 13))
CORNER_IDS: Tuple[int, ...] = tuple(range(13, 21))

# --- Slot geometry ---
# Edges in grid steps from the cube centre. Corners in quarter-turn steps
# on the unit corner lattice, so a corner quarter turn changes one component
# by one.
SLOT_POSITIONS: Dict[int, Tuple[int, int, int]] = {
    1: (0, 1, -1), 2: (-1, 0, -1), 3: (0, -1, -1), 4: (1, 0, -1),
    5: (0, 1, 1), 6: (1, 0, 1), 7: (0, -1, 1), 8: (-1, 0, 1),
    9: (1, 1, 0), 10: (1, -1, 0), 11: (-1, 1, 0), 12: (-1, -1, 0),
    13: (0, 1, 0), 14: (0, 0, 0), 15: (1, 0, 0), 16: (1, 1, 0),
    17: (0, 1, 1), 18: (1, 1, 1), 19: (1, 0, 1), 20: (0, 0, 1),
}

# --- Phase-2 observation ---
TOP_CORNER_SLOTS: Tuple[int, ...] = (17, 18, 19, 20)
BOTTOM_CORNER_SLOTS: Tuple[int, ...] = (13, 14, 15, 16)
# The only two slots the phase-2 corner macro twists.
TOP_TARGET_SLOT: int = 20
BOTTOM_TARGET_SLOT: int = 15

OBSERVATION_SIZES: Dict[int, int] = {1: 12, 2: 4, 3: 24, 4: 36}

_POSITIONS = np.array([SLOT_POSITIONS[s] for s in range(1, NUM_CUBIES + 1)], dtype=np.int64)


class EdgeOrientation(IntEnum):
    """Eigenvalue of the shifted edge spin operator."""
    ORIENTED = 0
    FLIPPED = -1


class CornerOrientation(IntEnum):
    """Eigenvalue of the corner spin operator; ZERO is the solved reference."""
    PLUS = 1
    ZERO = 0
    MINUS = -1


def is_edge(cubie_id: int) -> bool:
    return 1 <= cubie_id <= NUM_EDGES


def is_corner(cubie_id: int) -> bool:
    return NUM_EDGES < cubie_id <= NUM_CUBIES


def expected_displacement(cubie_id: int, slot_id: int) -> Tuple[int, int, int]:
    """
    Displacement a cubie must carry while sitting in a slot.

    Args:
        cubie_id: Cubie id (1..20)
        slot_id: Slot id of the same kind

    Returns:
        Integer vector ``position(slot) - position(home)``
    """
    if is_edge(cubie_id) != is_edge(slot_id):
        raise ValueError(f"Cubie {cubie_id} cannot occupy slot {slot_id}")
    here = _POSITIONS[slot_id - 1]
    home = _POSITIONS[cubie_id - 1]
    return tuple(int(v) for v in here - home)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class CubeState:
    """
    Immutable cube configuration.

    Attributes:
        occupancy: ``occupancy[s - 1]`` is the cubie id sitting in slot ``s``
        disp: ``disp[c - 1]`` is the displacement vector of cubie ``c``
        spin: ``spin[c - 1]`` is the spin eigenvalue of cubie ``c``
            (edges 0/-1, corners +1/0/-1)
    """
    occupancy: np.ndarray
    disp: np.ndarray
    spin: np.ndarray

    def __post_init__(self):
        _frozen(self.occupancy)
        _frozen(self.disp)
        _frozen(self.spin)

    def slot_of(self, cubie_id: int) -> int:
        return int(np.flatnonzero(self.occupancy == cubie_id)[0]) + 1

    def cubie_at(self, slot_id: int) -> int:
        return int(self.occupancy[slot_id - 1])

    def disp_of(self, cubie_id: int) -> Tuple[int, int, int]:
        return tuple(int(v) for v in self.disp[cubie_id - 1])

    def edge_spin(self, cubie_id: int) -> EdgeOrientation:
        if not is_edge(cubie_id):
            raise ValueError(f"Cubie {cubie_id} is not an edge")
        return EdgeOrientation(int(self.spin[cubie_id - 1]))

    def corner_spin(self, cubie_id: int) -> CornerOrientation:
        if not is_corner(cubie_id):
            raise ValueError(f"Cubie {cubie_id} is not a corner")
        return CornerOrientation(int(self.spin[cubie_id - 1]))

    def key(self) -> bytes:
        """Fixed-width canonical encoding used for hashing and deduplication."""
        return (
            self.occupancy.astype(np.int8).tobytes()
            + self.spin.astype(np.int8).tobytes()
            + self.disp.astype(np.int8).tobytes()
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubeState):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def make_state(occupancy: np.ndarray, disp: np.ndarray, spin: np.ndarray) -> CubeState:
    """Build a state from (possibly writable) arrays, taking copies."""
    return CubeState(
        occupancy=np.array(occupancy, dtype=np.int64),
        disp=np.array(disp, dtype=np.int64).reshape(NUM_CUBIES, 3),
        spin=np.array(spin, dtype=np.int64),
    )


def solved() -> CubeState:
    """Return the solved cube: identity occupancy, zero displacements, reference spins."""
    return make_state(
        np.arange(1, NUM_CUBIES + 1),
        np.zeros((NUM_CUBIES, 3)),
        np.zeros(NUM_CUBIES),
    )


def is_solved(state: CubeState) -> bool:
    return (
        not state.disp.any()
        and not state.spin.any()
        and bool(np.all(state.occupancy == np.arange(1, NUM_CUBIES + 1)))
    )


def edge_spins(state: CubeState) -> np.ndarray:
    return state.spin[:NUM_EDGES]


def corner_spins(state: CubeState) -> np.ndarray:
    return state.spin[NUM_EDGES:]


def flipped_edge_count(state: CubeState) -> int:
    return int(np.count_nonzero(edge_spins(state)))


def twist_sum(state: CubeState) -> int:
    """Corner eigenvalue sum reduced mod 3."""
    return int(corner_spins(state).sum()) % 3


def observe(state: CubeState, phase: int) -> np.ndarray:
    """
    Encode a state as the input vector of the phase network.

    Args:
        state: Cube state
        phase: Phase index 1..4

    Returns:
        float64 vector of length 12, 4, 24 or 36

    Raises:
        InvalidPhaseError: If phase is not 1..4
    """
    if phase == 1:
        return edge_spins(state).astype(np.float64)
    if phase == 2:
        spins = state.spin
        top = state.occupancy[np.array(TOP_CORNER_SLOTS) - 1] - 1
        bottom = state.occupancy[np.array(BOTTOM_CORNER_SLOTS) - 1] - 1
        return np.array([
            spins[state.cubie_at(TOP_TARGET_SLOT) - 1],
            spins[state.cubie_at(BOTTOM_TARGET_SLOT) - 1],
            np.count_nonzero(spins[top]) / 4.0,
            np.count_nonzero(spins[bottom]) / 4.0,
        ], dtype=np.float64)
    if phase == 3:
        return state.disp[NUM_EDGES:].astype(np.float64).ravel()
    if phase == 4:
        return state.disp[:NUM_EDGES].astype(np.float64).ravel()
    raise InvalidPhaseError(phase)
