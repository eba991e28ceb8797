"""
Rubik's group generators, macro moves and scrambling.

Each of the six face quarter turns is stored as static data: a 4-cycle of
edge slots and a 4-cycle of corner slots, with the translation and spin
action received by whichever cubie sits in each slot when the turn is made.
Cubies then advance one step along the cycle (``a -> b -> c -> d -> a``).

Every move, primitive or macro, compiles to a single ``SlotTransform``.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from qube.cube_core import (
    BOTTOM_TARGET_SLOT,
    NUM_CUBIES,
    NUM_EDGES,
    SLOT_POSITIONS,
    TOP_TARGET_SLOT,
    CubeState,
    make_state,
    solved,
)
from qube.errors import InvalidPhaseError, MacroError, MoveParseError

logger = logging.getLogger(__name__)

Vector = Tuple[int, int, int]


class SpinAction(Enum):
    """Spin operator applied to the cubie in a cycle slot."""
    IDENTITY = "I"
    EDGE_FLIP = "x"
    CORNER_A = "A"
    CORNER_C = "C"

    @property
    def increment(self) -> int:
        # Corner spins are counted mod 3 with A stepping Zero -> Plus -> Minus.
        return {"I": 0, "x": 1, "A": 1, "C": 2}[self.value]

    def inverse(self) -> "SpinAction":
        if self is SpinAction.CORNER_A:
            return SpinAction.CORNER_C
        if self is SpinAction.CORNER_C:
            return SpinAction.CORNER_A
        return self

    def act(self, eigenvalue: int) -> int:
        """Apply the operator to a single spin eigenvalue."""
        if self is SpinAction.EDGE_FLIP:
            return -1 - eigenvalue
        if self in (SpinAction.CORNER_A, SpinAction.CORNER_C):
            index = (eigenvalue % 3 + self.increment) % 3
            return (index + 1) % 3 - 1
        return eigenvalue


@dataclass(frozen=True)
class CycleEntry:
    slot: int
    translation: Vector
    action: SpinAction = SpinAction.IDENTITY


@dataclass(frozen=True)
class GeneratorSpec:
    """One quarter turn as an edge 4-cycle and a corner 4-cycle."""
    name: str
    edge_cycle: Tuple[CycleEntry, ...]
    corner_cycle: Tuple[CycleEntry, ...] = ()

    @property
    def cycles(self) -> Tuple[Tuple[CycleEntry, ...], ...]:
        return tuple(c for c in (self.edge_cycle, self.corner_cycle) if c)

    def to_transform(self) -> "SlotTransform":
        transform = SlotTransform.identity()
        dest = transform.dest.copy()
        shift = transform.shift.copy()
        twist = transform.twist.copy()
        for cycle in self.cycles:
            for i, entry in enumerate(cycle):
                nxt = cycle[(i + 1) % len(cycle)]
                dest[entry.slot - 1] = nxt.slot - 1
                shift[entry.slot - 1] = entry.translation
                twist[entry.slot - 1] = entry.action.increment
        return SlotTransform(dest, shift, twist)


def _cycle(slots: Sequence[int], translations: Sequence[Vector], actions: str) -> Tuple[CycleEntry, ...]:
    codes = {"I": SpinAction.IDENTITY, "x": SpinAction.EDGE_FLIP, "A": SpinAction.CORNER_A, "C": SpinAction.CORNER_C}
    return tuple(
        CycleEntry(slot, tuple(vec), codes[code])
        for slot, vec, code in zip(slots, translations, actions)
    )


# --- Face generators ---
# Slots are listed in cycle order; translations and actions belong to the slot.
GENERATORS: Dict[str, GeneratorSpec] = {
    "U": GeneratorSpec(
        "U",
        _cycle((5, 6, 7, 8), ((1, -1, 0), (-1, -1, 0), (-1, 1, 0), (1, 1, 0)), "IIII"),
        _cycle((17, 18, 19, 20), ((1, 0, 0), (0, -1, 0), (-1, 0, 0), (0, 1, 0)), "IIII"),
    ),
    "D": GeneratorSpec(
        "D",
        _cycle((1, 2, 3, 4), ((-1, -1, 0), (1, -1, 0), (1, 1, 0), (-1, 1, 0)), "IIII"),
        _cycle((13, 14, 15, 16), ((0, -1, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0)), "IIII"),
    ),
    "B": GeneratorSpec(
        "B",
        _cycle((3, 12, 7, 10), ((-1, 0, 1), (1, 0, 1), (1, 0, -1), (-1, 0, -1)), "xxxx"),
        _cycle((14, 20, 19, 15), ((0, 0, 1), (1, 0, 0), (0, 0, -1), (-1, 0, 0)), "ACAC"),
    ),
    "F": GeneratorSpec(
        "F",
        _cycle((1, 9, 5, 11), ((1, 0, 1), (-1, 0, 1), (-1, 0, -1), (1, 0, -1)), "xxxx"),
        _cycle((13, 16, 18, 17), ((1, 0, 0), (0, 0, 1), (-1, 0, 0), (0, 0, -1)), "CACA"),
    ),
    "L": GeneratorSpec(
        "L",
        _cycle((4, 10, 6, 9), ((0, -1, 1), (0, 1, 1), (0, 1, -1), (0, -1, -1)), "IIII"),
        _cycle((15, 19, 18, 16), ((0, 0, 1), (0, 1, 0), (0, 0, -1), (0, -1, 0)), "ACAC"),
    ),
    "R": GeneratorSpec(
        "R",
        _cycle((2, 11, 8, 12), ((0, 1, 1), (0, -1, 1), (0, -1, -1), (0, 1, -1)), "IIII"),
        _cycle((13, 17, 20, 14), ((0, 0, 1), (0, -1, 0), (0, 0, -1), (0, 1, 0)), "ACAC"),
    ),
}

FACE_NAMES: Tuple[str, ...] = tuple(GENERATORS)


def _slice_spec(name: str, slots: Tuple[int, int, int, int]) -> GeneratorSpec:
    translations = []
    for i, slot in enumerate(slots):
        nxt = slots[(i + 1) % len(slots)]
        translations.append(tuple(b - a for a, b in zip(SLOT_POSITIONS[slot], SLOT_POSITIONS[nxt])))
    return GeneratorSpec(name, _cycle(slots, translations, "IIII"))


# Middle rings between opposite faces. Translations follow the slot geometry,
# spins are left alone.
SLICES: Dict[str, GeneratorSpec] = {
    "Mx": _slice_spec("Mx", (1, 5, 7, 3)),
    "My": _slice_spec("My", (2, 8, 6, 4)),
    "Mz": _slice_spec("Mz", (9, 10, 12, 11)),
}

# Opposite-face pair whose half turns build the 3-cycles on each ring.
SLICE_FACE_PAIRS: Dict[str, Tuple[str, str]] = {"x": ("U", "D"), "y": ("U", "D"), "z": ("L", "R")}
EDGE_CYCLE_SETUPS: Tuple[str, ...] = ("U", "L", "R")

# Committed checksum of the tables above; a transcription change must update it.
EXPECTED_TABLES_SHA256 = "038ace657bd94a1b2ed9a9fbd4f09cebf41fe9fb42c8be1606e622adee23b6b7"


def tables_digest() -> str:
    """SHA-256 of the generator and slice tables, for the verification report."""
    payload = {
        name: [[(e.slot, list(e.translation), e.action.value) for e in cycle] for cycle in spec.cycles]
        for name, spec in {**GENERATORS, **SLICES}.items()
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


# =============================================================================
# Slot transforms
# =============================================================================

_EDGE_SLOTS = np.arange(NUM_CUBIES) < NUM_EDGES


def _normalize_twist(twist: np.ndarray) -> np.ndarray:
    return np.where(_EDGE_SLOTS, twist % 2, twist % 3)


@dataclass(frozen=True, eq=False)
class SlotTransform:
    """
    Net effect of a move on the cubie sitting in each slot.

    ``dest[k]`` is the 0-based slot the cubie in slot ``k + 1`` moves to,
    ``shift[k]`` the translation it receives and ``twist[k]`` its spin
    increment (mod 2 for edges, mod 3 for corners).
    """
    dest: np.ndarray
    shift: np.ndarray
    twist: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "twist", _normalize_twist(np.asarray(self.twist, dtype=np.int64)))
        for arr in (self.dest, self.shift, self.twist):
            arr.setflags(write=False)

    @classmethod
    def identity(cls) -> "SlotTransform":
        return cls(
            np.arange(NUM_CUBIES, dtype=np.int64),
            np.zeros((NUM_CUBIES, 3), dtype=np.int64),
            np.zeros(NUM_CUBIES, dtype=np.int64),
        )

    def then(self, other: "SlotTransform") -> "SlotTransform":
        """Transform equal to applying ``self`` and then ``other``."""
        return SlotTransform(
            other.dest[self.dest],
            self.shift + other.shift[self.dest],
            self.twist + other.twist[self.dest],
        )

    def inverse(self) -> "SlotTransform":
        dest = np.empty_like(self.dest)
        shift = np.empty_like(self.shift)
        twist = np.empty_like(self.twist)
        dest[self.dest] = np.arange(NUM_CUBIES)
        shift[self.dest] = -self.shift
        twist[self.dest] = -self.twist
        return SlotTransform(dest, shift, twist)

    def power(self, k: int) -> "SlotTransform":
        result = SlotTransform.identity()
        for _ in range(k):
            result = result.then(self)
        return result

    def is_identity(self) -> bool:
        return (
            bool(np.all(self.dest == np.arange(NUM_CUBIES)))
            and not self.shift.any()
            and not self.twist.any()
        )

    def moved_slots(self) -> List[int]:
        """1-based slots whose cubie changes slot."""
        return [int(k) + 1 for k in np.flatnonzero(self.dest != np.arange(NUM_CUBIES))]

    def key(self) -> bytes:
        return self.dest.tobytes() + self.shift.tobytes() + self.twist.tobytes()

    def apply(self, state: CubeState) -> CubeState:
        cubies = state.occupancy
        idx = cubies - 1
        disp = state.disp.copy()
        disp[idx] += self.shift
        spin = state.spin.copy()
        edge = idx < NUM_EDGES
        edge_index = (-spin[idx] + self.twist) % 2
        corner_index = (spin[idx] % 3 + self.twist) % 3
        spin[idx] = np.where(edge, -edge_index, (corner_index + 1) % 3 - 1)
        occupancy = np.empty_like(cubies)
        occupancy[self.dest] = cubies
        return make_state(occupancy, disp, spin)


# =============================================================================
# Moves
# =============================================================================

class MoveKind(Enum):
    GENERATOR = "generator"
    SLICE = "slice"
    SQUARE = "square"
    COMMUTATOR = "commutator"
    MACRO = "macro"


@dataclass(frozen=True)
class Move:
    """
    A move: a face turn, a slice turn, or a named macro.

    ``primitives`` lists the generator/slice tokens the move expands to.
    """
    name: str
    primitives: Tuple[str, ...]
    kind: MoveKind = MoveKind.MACRO

    @property
    def is_macro(self) -> bool:
        return self.kind not in (MoveKind.GENERATOR, MoveKind.SLICE)

    def inverse(self) -> "Move":
        if self.kind is MoveKind.SQUARE:
            return self
        return Move(
            _toggle_prime(self.name),
            tuple(_toggle_prime(p) for p in reversed(self.primitives)),
            self.kind,
        )

    def __str__(self) -> str:
        return self.name


def _toggle_prime(name: str) -> str:
    return name[:-1] if name.endswith("'") else name + "'"


def _primitive_transform(token: str) -> SlotTransform:
    base = token.rstrip("'")
    spec = GENERATORS.get(base) or SLICES.get(base)
    if spec is None:
        raise MoveParseError(token)
    transform = spec.to_transform()
    return transform.inverse() if token.endswith("'") else transform


@lru_cache(maxsize=None)
def _compile_primitives(primitives: Tuple[str, ...]) -> SlotTransform:
    transform = SlotTransform.identity()
    for token in primitives:
        transform = transform.then(_primitive_transform(token))
    return transform


def compile_move(move: Move) -> SlotTransform:
    return _compile_primitives(move.primitives)


def generator(name: str) -> Move:
    """Face quarter turn, e.g. ``"F"`` or ``"F'"``."""
    if name.rstrip("'") not in GENERATORS or name.count("'") > 1:
        raise MoveParseError(name)
    return Move(name, (name,), MoveKind.GENERATOR)


def slice_move(name: str) -> Move:
    if name.rstrip("'") not in SLICES or name.count("'") > 1:
        raise MoveParseError(name)
    return Move(name, (name,), MoveKind.SLICE)


def square(move: Move) -> Move:
    return Move(f"{move.name}2", move.primitives * 2, MoveKind.SQUARE)


def commutator(a: Move, b: Move, name: Optional[str] = None) -> Move:
    """``a, b, a^-1, b^-1``."""
    return Move(
        name or f"[{a.name},{b.name}]",
        a.primitives + b.primitives + a.inverse().primitives + b.inverse().primitives,
        MoveKind.COMMUTATOR,
    )


def conjugate(setup: Move, move: Move) -> Move:
    """``setup, move, setup^-1``."""
    return Move(
        f"{setup.name}:{move.name}",
        setup.primitives + move.primitives + setup.inverse().primitives,
        MoveKind.MACRO,
    )


def corner_twister() -> Move:
    """The squared commutator ``(R D R^-1 D^-1)^2``; twists corners 13, 14, 16 and 20 in place."""
    c = commutator(generator("R"), generator("D"))
    return Move(f"{c.name}2", c.primitives * 2, MoveKind.MACRO)


def corner_pair_twister() -> Move:
    """
    Phase-2 corner macro ``L [T, U] L^-1`` with ``T`` the squared ``[R, D]``.

    ``[T, U]`` twists two top corners and nothing else; the ``L`` setup
    carries one of them down to the bottom layer. Net effect: the corner in
    ``TOP_TARGET_SLOT`` turns anticlockwise, the one in ``BOTTOM_TARGET_SLOT``
    clockwise, every corner keeps its slot and no edge flips.
    """
    return conjugate(generator("L"), commutator(corner_twister(), generator("U")))


def slice_commutators(axis: str, first: str, second: str, reverse: bool = False) -> Tuple[Move, Move]:
    """
    The two commutators ``C1 = A2 M A2 M^-1`` and ``C2 = B2 M B2 M^-1``.

    Args:
        axis: Ring axis, one of ``x``, ``y``, ``z``
        first: Face A of the opposite pair
        second: Face B of the opposite pair
        reverse: Use the inverse slice turn as M
    """
    m = slice_move(f"M{axis}")
    if reverse:
        m = m.inverse()
    c1 = commutator(square(generator(first)), m)
    c2 = commutator(square(generator(second)), m)
    return c1, c2


def edge_cycle(axis: str, first: str, second: str, reverse: bool = False, swapped: bool = False) -> Move:
    """
    Edge 3-cycle ``C3 = C1 C2 C1 C2``.

    ``swapped`` gives ``C4``: the commutators trade places and are inverted
    (``[a, b]^-1 = [b, a]``), so ``C4 = C2^-1 C1^-1 C2^-1 C1^-1`` cycles the
    same three edges the other way.
    """
    c1, c2 = slice_commutators(axis, first, second, reverse)
    if swapped:
        c1, c2 = c2.inverse(), c1.inverse()
    label = "C4" if swapped else "C3"
    sign = "-" if reverse else "+"
    return Move(f"{label}{axis}{sign}{first}{second}", (c1.primitives + c2.primitives) * 2, MoveKind.MACRO)


def expand_macro(move: Move) -> List[Move]:
    """
    Expand a macro into its generator and slice moves.

    Raises:
        MacroError: If the move is already a primitive
    """
    if not move.is_macro:
        raise MacroError(f"{move.name} is not a macro")
    return [
        slice_move(token) if token.rstrip("'") in SLICES else generator(token)
        for token in move.primitives
    ]


# =============================================================================
# Move sequences
# =============================================================================

def apply(state: CubeState, move: Move) -> CubeState:
    return compile_move(move).apply(state)


def apply_sequence(state: CubeState, moves: Iterable[Move]) -> CubeState:
    for move in moves:
        state = apply(state, move)
    return state


def inverse(moves: Sequence[Move]) -> List[Move]:
    """Reverse the sequence and invert every move."""
    return [move.inverse() for move in reversed(moves)]


def sequence_transform(moves: Iterable[Move]) -> SlotTransform:
    transform = SlotTransform.identity()
    for move in moves:
        transform = transform.then(compile_move(move))
    return transform


def format_moves(moves: Iterable[Move]) -> str:
    return " ".join(move.name for move in moves)


# =============================================================================
# Action sets
# =============================================================================

def _dedupe(moves: Iterable[Move]) -> Tuple[Move, ...]:
    seen = set()
    unique = []
    for move in moves:
        key = compile_move(move).key()
        if key not in seen:
            seen.add(key)
            unique.append(move)
    return tuple(unique)


def base_edge_cycles() -> Tuple[Move, ...]:
    """C3/C4 over ring axis, ordered face pair and slice direction, deduplicated."""
    candidates = []
    for axis, (a, b) in SLICE_FACE_PAIRS.items():
        for first, second in ((a, b), (b, a)):
            for reverse in (False, True):
                for swapped in (False, True):
                    candidates.append(edge_cycle(axis, first, second, reverse, swapped))
    return _dedupe(candidates)


@lru_cache(maxsize=None)
def phase_action_set(phase: int) -> Tuple[Move, ...]:
    """
    Moves available to the agent in a phase.

    Phase 1 uses the twelve quarter turns, phase 2 the corner pair
    twister with U and D, phase 3 U/D quarter turns with the remaining
    half turns, phase 4 the edge 3-cycles and their setup conjugates.
    """
    if phase == 1:
        return tuple(generator(n) for face in FACE_NAMES for n in (face, face + "'"))
    if phase == 2:
        return (corner_pair_twister(), generator("U"), generator("D"))
    if phase == 3:
        return (
            generator("U"), generator("U'"), generator("D"), generator("D'"),
            square(generator("B")), square(generator("F")),
            square(generator("L")), square(generator("R")),
        )
    if phase == 4:
        base = base_edge_cycles()
        setups = [generator(name) for name in EDGE_CYCLE_SETUPS]
        return _dedupe(list(base) + [conjugate(s, m) for s in setups for m in base])
    raise InvalidPhaseError(phase)


# =============================================================================
# Notation
# =============================================================================

def _named_macros() -> Dict[str, Move]:
    named = {}
    for phase in (2, 3, 4):
        for move in phase_action_set(phase):
            if move.is_macro:
                named[move.name] = move
                named[move.inverse().name] = move.inverse()
    return named


def parse_move(token: str, index: Optional[int] = None) -> Move:
    """
    Parse one token: a face with optional ``'`` or ``2`` suffix, a slice
    turn (``Mx``, ``Mx'``), or a named macro. Case-sensitive.
    """
    try:
        if token.endswith("2") and token[:-1] in GENERATORS:
            return square(generator(token[:-1]))
        if token.rstrip("'") in GENERATORS:
            return generator(token)
        if token.rstrip("'") in SLICES:
            return slice_move(token)
    except MoveParseError:
        raise MoveParseError(token, index) from None
    macro = _named_macros().get(token)
    if macro is None:
        raise MoveParseError(token, index)
    return macro


def parse_moves(text: str) -> List[Move]:
    return [parse_move(token, i) for i, token in enumerate(text.split())]


# =============================================================================
# Scrambling
# =============================================================================

def scramble(rng: np.random.Generator, action_set: Sequence[Move], length: int) -> Tuple[CubeState, List[Move]]:
    """
    Apply ``length`` uniformly drawn actions to the solved cube.

    Returns:
        Tuple of (scrambled state, move sequence)
    """
    if length < 1:
        raise ValueError(f"Scramble length must be >= 1, got {length}")
    if not action_set:
        raise ValueError("Empty action set")
    draws = rng.integers(0, len(action_set), size=length)
    moves = [action_set[int(i)] for i in draws]
    return apply_sequence(solved(), moves), moves


# =============================================================================
# Group property report
# =============================================================================

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class GroupReport:
    checks: List[CheckResult] = field(default_factory=list)
    digest: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))

    def to_text(self) -> str:
        width = max((len(c.name) for c in self.checks), default=10)
        lines = [f"Generator tables sha256: {self.digest}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"{c.name.ljust(width)}  {status}  {c.detail}".rstrip())
        lines.append(f"{len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _spin_class(transform: SlotTransform) -> Tuple[bool, bool]:
    """(edge spins preserved, corner spins preserved) for every state."""
    return (not transform.twist[:NUM_EDGES].any(), not transform.twist[NUM_EDGES:].any())


def _preserves_corner_positions(transform: SlotTransform) -> bool:
    corners = np.arange(NUM_EDGES, NUM_CUBIES)
    return bool(np.all(transform.dest[corners] == corners)) and not transform.shift[NUM_EDGES:].any()


def group_property_report() -> GroupReport:
    """Check the algebraic properties of the generator tables and macros."""
    report = GroupReport(digest=tables_digest())
    report.add("tables digest", report.digest == EXPECTED_TABLES_SHA256, f"expected {EXPECTED_TABLES_SHA256[:12]}")
    expected_class = {"U": (True, True), "D": (True, True), "L": (True, False),
                      "R": (True, False), "F": (False, False), "B": (False, False)}

    for name, spec in GENERATORS.items():
        t = spec.to_transform()
        report.add(f"order 4: {name}", t.power(4).is_identity() and not t.power(2).is_identity())
        report.add(f"inverse: {name}", t.then(compile_move(generator(name + "'"))).is_identity())
        sums = [tuple(int(v) for v in np.sum([e.translation for e in c], axis=0)) for c in spec.cycles]
        report.add(f"translation sum zero: {name}", all(s == (0, 0, 0) for s in sums), f"sums={sums}")
        shapes_ok = all(
            sorted(abs(v) for v in e.translation) == [0, 1, 1] for e in spec.edge_cycle
        ) and all(
            sorted(abs(v) for v in e.translation) == [0, 0, 1] for e in spec.corner_cycle
        )
        report.add(f"translation shape: {name}", shapes_ok)
        geometry_ok = True
        for cycle in spec.cycles:
            for i, entry in enumerate(cycle):
                nxt = cycle[(i + 1) % len(cycle)]
                delta = tuple(b - a for a, b in zip(SLOT_POSITIONS[entry.slot], SLOT_POSITIONS[nxt.slot]))
                geometry_ok &= delta == entry.translation
        report.add(f"table matches slot geometry: {name}", geometry_ok)
        spin_class = _spin_class(t)
        report.add(
            f"orientation class: {name}",
            spin_class == expected_class[name],
            f"edges kept={spin_class[0]} corners kept={spin_class[1]}",
        )
        report.add(f"square keeps spins: {name}2", all(_spin_class(t.power(2))))

    ud = compile_move(generator("U")).then(compile_move(generator("D")))
    du = compile_move(generator("D")).then(compile_move(generator("U")))
    report.add("U and D commute", ud.key() == du.key())

    for move in base_edge_cycles():
        t = compile_move(move)
        moved = t.moved_slots()
        ok = (
            len(moved) == 3
            and all(s <= NUM_EDGES for s in moved)
            and not t.twist.any()
            and t.power(3).is_identity()
        )
        report.add(f"3-cycle: {move.name}", ok, f"slots={moved}")

    for axis, (a, b) in SLICE_FACE_PAIRS.items():
        for reverse in (False, True):
            c3 = compile_move(edge_cycle(axis, a, b, reverse))
            c4 = compile_move(edge_cycle(axis, a, b, reverse, swapped=True))
            report.add(
                f"C4 inverts C3: {axis}{'-' if reverse else '+'}{a}{b}",
                c3.then(c4).is_identity() and not c3.then(c3).is_identity(),
            )

    twister = compile_move(corner_pair_twister())
    twisted = sorted(int(k) + 1 for k in np.flatnonzero(twister.twist))
    report.add(
        "phase 2 macro twists only the target slots",
        twisted == sorted((TOP_TARGET_SLOT, BOTTOM_TARGET_SLOT)) and _preserves_corner_positions(twister),
        f"twisted={twisted}",
    )

    for phase in (2, 3, 4):
        bad = []
        for move in phase_action_set(phase):
            t = compile_move(move)
            edges_kept, corners_kept = _spin_class(t)
            keeps = edges_kept and (phase < 3 or corners_kept) and (phase < 4 or _preserves_corner_positions(t))
            if not keeps:
                bad.append(move.name)
        report.add(f"phase {phase} actions keep earlier ground states", not bad, f"offenders={bad}" if bad else "")

    if not report.passed:
        for failure in report.failures:
            logger.error(f"Group check failed: {failure.name} {failure.detail}")
    return report
