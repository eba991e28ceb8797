"""
Unfolded text net of a cube state.

Each face is a 3x3 grid of the slots on that face. A cell shows the cubie
id sitting in the slot followed by its spin mark: ``'`` for a flipped edge,
``+``/``-`` for a twisted corner. Centres show the face letter.

        U
    L   F   R   B
        D
"""
from typing import Dict, List, Tuple

from qube.cube_core import NUM_EDGES, SLOT_POSITIONS, CubeState

CELL = 4

# face -> (axis, side, (row axis, row sign), (col axis, col sign))
# Cell row = 1 - sign * coord[row axis], col = 1 + sign * coord[col axis].
FACE_FRAMES: Dict[str, Tuple[int, int, Tuple[int, int], Tuple[int, int]]] = {
    "U": (2, 1, (1, -1), (0, -1)),
    "F": (1, 1, (2, 1), (0, -1)),
    "D": (2, -1, (1, 1), (0, -1)),
    "L": (0, 1, (2, 1), (1, 1)),
    "R": (0, -1, (2, 1), (1, -1)),
    "B": (1, -1, (2, 1), (0, 1)),
}

NET_ROWS: Tuple[Tuple[str, ...], ...] = ((" ", "U"), ("L", "F", "R", "B"), (" ", "D"))


def _cube_coords(slot: int) -> Tuple[int, int, int]:
    """Slot position on a common -1..1 grid (corners are stored on a 0/1 lattice)."""
    pos = SLOT_POSITIONS[slot]
    if slot <= NUM_EDGES:
        return pos
    return tuple(2 * c - 1 for c in pos)


def _mark(state: CubeState, cubie: int) -> str:
    spin = int(state.spin[cubie - 1])
    if cubie <= NUM_EDGES:
        return "'" if spin else " "
    return {1: "+", 0: " ", -1: "-"}[spin]


def face_grid(state: CubeState, face: str) -> List[List[str]]:
    axis, side, (row_axis, row_sign), (col_axis, col_sign) = FACE_FRAMES[face]
    grid = [["" for _ in range(3)] for _ in range(3)]
    grid[1][1] = f" {face}  "[:CELL]
    for slot in SLOT_POSITIONS:
        coords = _cube_coords(slot)
        if coords[axis] != side:
            continue
        row = 1 - row_sign * coords[row_axis]
        col = 1 + col_sign * coords[col_axis]
        cubie = state.cubie_at(slot)
        grid[row][col] = f"{cubie:>2}{_mark(state, cubie)}".ljust(CELL)
    return grid


def render_net(state: CubeState) -> str:
    """Multi-line text net of the state."""
    blank = [[" " * CELL] * 3 for _ in range(3)]
    lines = []
    for faces in NET_ROWS:
        grids = [blank if face == " " else face_grid(state, face) for face in faces]
        for r in range(3):
            lines.append(" ".join("".join(g[r]) for g in grids).rstrip())
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
