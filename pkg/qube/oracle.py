"""
Brute-force ground truth: breadth-first solving and an exhaustive scan of
the states reachable from solved.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from qube.cube_core import (
    NUM_CUBIES,
    CubeState,
    expected_displacement,
    flipped_edge_count,
    is_solved,
    solved,
    twist_sum,
)
from qube.hamiltonian import PhaseHamiltonian, energy, ground_condition
from qube.rubik_group import Move, apply, format_moves, phase_action_set

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10_000_000
MAX_DISPLACEMENT = 2


@dataclass(frozen=True)
class SearchNode:
    key: bytes
    depth: int
    parent: Optional[bytes]
    move: Optional[Move]


class BfsStatus(Enum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class BfsResult:
    status: BfsStatus
    moves: Optional[List[Move]] = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is BfsStatus.FOUND


def _path(nodes: Dict[bytes, SearchNode], key: bytes) -> List[Move]:
    moves = []
    node = nodes[key]
    while node.parent is not None:
        moves.append(node.move)
        node = nodes[node.parent]
    return moves[::-1]


def bfs_solve(state: CubeState, action_set: Sequence[Move], max_depth: int,
              target: Callable[[CubeState], bool] = is_solved,
              max_nodes: int = DEFAULT_NODE_BUDGET) -> BfsResult:
    """
    Shortest action sequence from ``state`` to a state satisfying ``target``.

    Args:
        state: Start state
        action_set: Moves to search over
        max_depth: Longest sequence considered
        target: Goal predicate, default ``is_solved``
        max_nodes: Node budget; exceeding it returns BUDGET_EXCEEDED

    Returns:
        BfsResult with the moves when found
    """
    if target(state):
        return BfsResult(BfsStatus.FOUND, [], 1)
    root = state.key()
    nodes: Dict[bytes, SearchNode] = {root: SearchNode(root, 0, None, None)}
    frontier = [state]
    for depth in range(1, max_depth + 1):
        next_frontier = []
        for current in frontier:
            parent = current.key()
            for move in action_set:
                child = apply(current, move)
                key = child.key()
                if key in nodes:
                    continue
                nodes[key] = SearchNode(key, depth, parent, move)
                if target(child):
                    return BfsResult(BfsStatus.FOUND, _path(nodes, key), len(nodes))
                if len(nodes) >= max_nodes:
                    logger.warning(f"BFS node budget {max_nodes} exceeded at depth {depth}")
                    return BfsResult(BfsStatus.BUDGET_EXCEEDED, None, len(nodes))
                next_frontier.append(child)
        frontier = next_frontier
        if not frontier:
            break
    return BfsResult(BfsStatus.NOT_FOUND, None, len(nodes))


# =============================================================================
# Invariant scan
# =============================================================================

@dataclass
class Violation:
    check: str
    witness: List[Move]
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.check}: {self.detail} (witness: {format_moves(self.witness) or '<solved>'})"


@dataclass
class ScanReport:
    depth: int
    layer_sizes: List[int] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)
    checks_run: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def states(self) -> int:
        return sum(self.layer_sizes)

    def to_text(self) -> str:
        lines = [f"Reachable-state scan to depth {self.depth}: {self.states} states"]
        lines += [f"  depth {d}: {n}" for d, n in enumerate(self.layer_sizes)]
        for name, count in self.checks_run.items():
            failed = sum(1 for v in self.violations if v.check == name)
            lines.append(f"  {name.ljust(24)} {'PASS' if not failed else 'FAIL'}  ({count} checked, {failed} violations)")
        lines += [f"  ! {v}" for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        return "\n".join(lines)


class _Scanner:
    def __init__(self, depth: int):
        self.report = ScanReport(depth)
        self.nodes: Dict[bytes, SearchNode] = {}
        self.seen_disp: Dict[Tuple[int, int], Tuple[int, int, int]] = {}

    def count(self, check: str) -> None:
        self.report.checks_run[check] = self.report.checks_run.get(check, 0) + 1

    def fail(self, check: str, key: bytes, detail: str) -> None:
        self.report.violations.append(Violation(check, _path(self.nodes, key), detail))

    def check_state(self, state: CubeState, key: bytes) -> None:
        self.count("edge flip parity")
        flips = flipped_edge_count(state)
        if flips % 2:
            self.fail("edge flip parity", key, f"{flips} flipped edges")

        self.count("corner twist sum")
        if twist_sum(state):
            self.fail("corner twist sum", key, f"twist sum {twist_sum(state)} mod 3")

        self.count("displacement bound")
        if np.abs(state.disp).max() > MAX_DISPLACEMENT:
            self.fail("displacement bound", key, f"max |n| = {np.abs(state.disp).max()}")

        self.count("path independence")
        for slot in range(1, NUM_CUBIES + 1):
            cubie = state.cubie_at(slot)
            disp = state.disp_of(cubie)
            expected = expected_displacement(cubie, slot)
            earlier = self.seen_disp.setdefault((cubie, slot), disp)
            if disp != expected or disp != earlier:
                self.fail("path independence", key, f"cubie {cubie} in slot {slot} has {disp}, expected {expected}")
                break

        self.count("energy zero iff ground")
        for which in PhaseHamiltonian:
            if (energy(state, which) == 0) != ground_condition(state, which):
                self.fail("energy zero iff ground", key, f"{which.name} disagrees with its ground predicate")


def reachable_invariant_scan(depth: int, action_set: Optional[Sequence[Move]] = None) -> ScanReport:
    """
    Enumerate every distinct state within ``depth`` moves of solved and check
    the state invariants on each, plus injectivity of every action per layer.

    Args:
        depth: Scan depth (keep small; layers grow about elevenfold)
        action_set: Moves to expand with, default the twelve quarter turns

    Returns:
        ScanReport listing layer sizes and any violations with witnesses
    """
    actions = tuple(action_set) if action_set is not None else phase_action_set(1)
    scanner = _Scanner(depth)
    start = solved()
    root = start.key()
    scanner.nodes[root] = SearchNode(root, 0, None, None)
    scanner.check_state(start, root)
    layer = [start]
    scanner.report.layer_sizes.append(1)

    for d in range(1, depth + 1):
        next_layer = []
        for move in actions:
            images = set()
            for state in layer:
                child = apply(state, move)
                key = child.key()
                images.add(key)
                if key not in scanner.nodes:
                    scanner.nodes[key] = SearchNode(key, d, state.key(), move)
                    scanner.check_state(child, key)
                    next_layer.append(child)
            scanner.count("action injective per layer")
            if len(images) != len(layer):
                scanner.fail(
                    "action injective per layer", layer[0].key(),
                    f"{move.name} maps {len(layer)} depth-{d - 1} states to {len(images)}",
                )
        layer = next_layer
        scanner.report.layer_sizes.append(len(layer))
        logger.info(f"Scan depth {d}: {len(layer)} new states")
        if not layer:
            break

    if scanner.report.violations:
        logger.error(f"Invariant scan found {len(scanner.report.violations)} violations")
    return scanner.report
