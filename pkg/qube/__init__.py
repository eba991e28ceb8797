"""Quantum-formalism Rubik's cube model and the four-phase DDQN solver."""
from qube.cube_core import CubeState, is_solved, observe, solved
from qube.errors import QubeError
from qube.hamiltonian import CoefficientSet, PhaseHamiltonian, energy, reward, total_energy
from qube.rubik_group import Move, apply, apply_sequence, inverse, parse_moves, phase_action_set, scramble

__all__ = [
    'CubeState',
    'CoefficientSet',
    'Move',
    'PhaseHamiltonian',
    'QubeError',
    'apply',
    'apply_sequence',
    'energy',
    'inverse',
    'is_solved',
    'observe',
    'parse_moves',
    'phase_action_set',
    'reward',
    'scramble',
    'solved',
    'total_energy',
]
