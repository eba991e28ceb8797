import numpy as np
import pytest

from qube.cube_core import (
    NUM_CUBIES,
    CornerOrientation,
    CubeState,
    EdgeOrientation,
    expected_displacement,
    flipped_edge_count,
    is_solved,
    make_state,
    observe,
    solved,
    twist_sum,
)
from qube.errors import InvalidPhaseError
from qube.hamiltonian import PhaseHamiltonian, is_ground
from qube.rubik_group import apply, apply_sequence, generator


def test_solved_state_is_reference():
    state = solved()
    assert all(state.disp_of(c) == (0, 0, 0) for c in range(1, NUM_CUBIES + 1))
    assert state.edge_spin(1) is EdgeOrientation.ORIENTED
    assert state.corner_spin(13) is CornerOrientation.ZERO
    assert [state.cubie_at(s) for s in range(1, NUM_CUBIES + 1)] == list(range(1, NUM_CUBIES + 1))
    assert is_solved(state)


def test_solved_is_ground_for_every_hamiltonian():
    assert all(is_ground(solved(), which) for which in PhaseHamiltonian)


def test_state_is_immutable():
    state = solved()
    with pytest.raises(ValueError):
        state.spin[0] = -1


def test_equal_states_hash_alike():
    a = apply(solved(), generator("R"))
    b = apply(solved(), generator("R"))
    assert a == b
    assert len({a, b, solved()}) == 2


def test_spin_accessors_reject_wrong_kind():
    with pytest.raises(ValueError):
        solved().edge_spin(13)
    with pytest.raises(ValueError):
        solved().corner_spin(1)


def test_is_solved_after_quarter_turns():
    f = generator("F")
    assert not is_solved(apply(solved(), f))
    assert is_solved(apply_sequence(solved(), [f] * 4))


def test_observe_solved_phase_1_is_all_zero():
    obs = observe(solved(), 1)
    assert obs.shape == (12,)
    assert not obs.any()


def test_observe_after_f_flips_four_edges():
    obs = observe(apply(solved(), generator("F")), 1)
    assert sorted(np.flatnonzero(obs == -1) + 1) == [1, 5, 9, 11]
    assert np.count_nonzero(obs) == 4


def test_observe_after_f_moves_four_corners_by_unit_steps():
    disp = observe(apply(solved(), generator("F")), 3).reshape(8, 3)
    moved = [row for row in disp if row.any()]
    assert len(moved) == 4
    assert all(np.linalg.norm(row) == 1.0 for row in moved)


@pytest.mark.parametrize("phase, size", [(1, 12), (2, 4), (3, 24), (4, 36)])
def test_observation_sizes(phase, size):
    assert observe(apply(solved(), generator("B")), phase).shape == (size,)


def test_observe_phase_2_reads_target_slots_and_layer_counts():
    spin = np.zeros(NUM_CUBIES)
    spin[20 - 1] = 1      # cubie 20 sits in the top target slot
    spin[14 - 1] = -1     # cubie 14, bottom layer
    state = make_state(np.arange(1, NUM_CUBIES + 1), np.zeros((NUM_CUBIES, 3)), spin)
    assert observe(state, 2).tolist() == [1.0, 0.0, 0.25, 0.25]


@pytest.mark.parametrize("phase", [0, 5, -1])
def test_observe_rejects_bad_phase(phase):
    with pytest.raises(InvalidPhaseError):
        observe(solved(), phase)


def test_f_turn_moves_cubie_13_and_1_as_tabled():
    state = apply(solved(), generator("F"))
    assert state.disp_of(13) == (1, 0, 0)
    assert state.corner_spin(13) is CornerOrientation.MINUS
    assert state.disp_of(1) == (1, 0, 1)
    assert state.edge_spin(1) is EdgeOrientation.FLIPPED


def test_expected_displacement_follows_slot_geometry():
    state = apply_sequence(solved(), [generator(n) for n in ("F", "R", "U'", "B")])
    for slot in range(1, NUM_CUBIES + 1):
        cubie = state.cubie_at(slot)
        assert state.disp_of(cubie) == expected_displacement(cubie, slot)


def test_expected_displacement_rejects_mixed_kinds():
    with pytest.raises(ValueError):
        expected_displacement(1, 13)


def test_parity_helpers_on_single_turns():
    f = apply(solved(), generator("F"))
    assert flipped_edge_count(f) == 4
    assert twist_sum(f) == 0
    assert isinstance(f, CubeState)
