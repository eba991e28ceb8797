import numpy as np
import pytest

from qube.cube_core import NUM_EDGES, CornerOrientation, is_solved, solved
from qube.errors import InvalidPhaseError, MacroError, MoveParseError
from qube.rubik_group import (
    GENERATORS,
    SLICE_FACE_PAIRS,
    SpinAction,
    apply,
    apply_sequence,
    base_edge_cycles,
    commutator,
    compile_move,
    corner_pair_twister,
    corner_twister,
    edge_cycle,
    expand_macro,
    format_moves,
    generator,
    group_property_report,
    inverse,
    parse_move,
    parse_moves,
    phase_action_set,
    scramble,
    sequence_transform,
    slice_move,
    square,
    tables_digest,
)


@pytest.mark.parametrize("name", list(GENERATORS))
def test_generator_has_order_four(name):
    t = compile_move(generator(name))
    assert t.power(4).is_identity()
    assert not t.power(2).is_identity()


@pytest.mark.parametrize("name", list(GENERATORS))
def test_square_keeps_all_spins(name):
    state = apply(solved(), square(generator(name)))
    assert not state.spin.any()


@pytest.mark.parametrize("name", list(GENERATORS))
def test_prime_undoes_turn(name):
    state = apply_sequence(solved(), [generator(name), generator(name + "'")])
    assert is_solved(state)


def test_corner_spin_actions_cycle_with_period_three():
    for action in (SpinAction.CORNER_A, SpinAction.CORNER_C):
        for start in (-1, 0, 1):
            value = start
            for _ in range(3):
                value = action.act(value)
            assert value == start
    assert SpinAction.CORNER_A.act(0) == 1
    assert SpinAction.CORNER_C.act(0) == -1
    assert SpinAction.EDGE_FLIP.act(0) == -1
    assert SpinAction.EDGE_FLIP.act(-1) == 0


def test_inverse_of_sequence():
    assert inverse([generator("F")]) == [generator("F'")]
    u, d2 = generator("U"), square(generator("D"))
    assert format_moves(inverse([u, d2])) == "D2 U'"


def test_random_sequence_followed_by_inverse_is_solved(rng):
    state, moves = scramble(rng, phase_action_set(1), 50)
    back = apply_sequence(state, inverse(moves))
    assert is_solved(back)
    assert not back.disp.any()


def test_commutator_of_u_and_d_is_identity():
    move = commutator(generator("U"), generator("D"))
    assert compile_move(move).is_identity()
    assert is_solved(apply_sequence(solved(), expand_macro(move)))


def test_expand_macro_matches_compiled_transform(rng):
    state, _ = scramble(rng, phase_action_set(1), 10)
    for move in phase_action_set(4)[:6] + (corner_twister(), corner_pair_twister()):
        assert apply_sequence(state, expand_macro(move)) == apply(state, move)


def test_expand_macro_rejects_primitives():
    with pytest.raises(MacroError):
        expand_macro(generator("F"))
    with pytest.raises(MacroError):
        expand_macro(slice_move("Mx"))


def test_corner_twister_expansion():
    assert [m.name for m in expand_macro(corner_twister())] == ["R", "D", "R'", "D'"] * 2


def test_corner_pair_twister_expansion():
    assert [m.name for m in expand_macro(corner_pair_twister())] == (
        ["L"] + ["R", "D", "R'", "D'"] * 2 + ["U"] + ["D", "R", "D'", "R'"] * 2 + ["U'", "L'"]
    )


def test_corner_pair_twister_twists_only_the_target_slots():
    state = apply(solved(), corner_pair_twister())
    assert [state.cubie_at(s) for s in range(NUM_EDGES + 1, 21)] == list(range(NUM_EDGES + 1, 21))
    assert state.corner_spin(20) is CornerOrientation.MINUS
    assert state.corner_spin(15) is CornerOrientation.PLUS
    others = [c for c in range(1, 21) if c not in (15, 20)]
    assert not state.spin[np.array(others) - 1].any()


def test_corner_pair_twister_leaves_other_spins_of_a_scrambled_cube(rng):
    state, _ = scramble(rng, phase_action_set(2), 30)
    after = apply(state, corner_pair_twister())
    for slot in range(1, 21):
        if slot in (15, 20):
            continue
        assert after.spin[after.cubie_at(slot) - 1] == state.spin[state.cubie_at(slot) - 1]
    assert after.corner_spin(after.cubie_at(20)) == SpinAction.CORNER_C.act(state.corner_spin(state.cubie_at(20)))
    assert after.corner_spin(after.cubie_at(15)) == SpinAction.CORNER_A.act(state.corner_spin(state.cubie_at(15)))


def test_edge_cycle_moves_exactly_three_edges():
    state = apply(solved(), edge_cycle("x", "U", "D"))
    moved = [s for s in range(1, 21) if state.cubie_at(s) != s]
    assert len(moved) == 3
    assert all(s <= NUM_EDGES for s in moved)
    assert not state.spin.any()


@pytest.mark.parametrize("axis", list(SLICE_FACE_PAIRS))
@pytest.mark.parametrize("reverse", [False, True])
def test_c4_cycles_the_c3_triple_the_other_way(axis, reverse):
    first, second = SLICE_FACE_PAIRS[axis]
    c3 = edge_cycle(axis, first, second, reverse)
    c4 = edge_cycle(axis, first, second, reverse, swapped=True)
    after_c3 = apply(solved(), c3)
    triple = compile_move(c3).moved_slots()
    assert compile_move(c4).moved_slots() == triple
    restored = apply(after_c3, c4)
    assert [restored.cubie_at(s) for s in triple] == triple
    assert is_solved(restored)
    # Distinct actions: C3 is not its own inverse, so C4 = C3 C3.
    assert apply(solved(), c4) != after_c3
    assert apply(after_c3, c3) == apply(solved(), c4)


def test_base_edge_cycles_cover_every_ring_triple_both_ways():
    cycles = base_edge_cycles()
    assert len(cycles) == 24
    keys = {compile_move(m).key() for m in cycles}
    assert all(compile_move(m).inverse().key() in keys for m in cycles)


@pytest.mark.parametrize("move", base_edge_cycles(), ids=lambda m: m.name)
def test_base_edge_cycles_are_three_cycles(move):
    t = compile_move(move)
    assert len(t.moved_slots()) == 3
    assert t.power(3).is_identity()


def test_action_set_sizes():
    assert [len(phase_action_set(p)) for p in (1, 2, 3, 4)] == [12, 3, 8, 56]


def test_phase_4_actions_cover_every_edge_slot():
    covered = set()
    for move in phase_action_set(4):
        t = compile_move(move)
        assert len(t.moved_slots()) == 3
        covered.update(t.moved_slots())
    assert covered == set(range(1, NUM_EDGES + 1))


def test_phase_4_actions_are_distinct_transforms():
    keys = {compile_move(m).key() for m in phase_action_set(4)}
    assert len(keys) == 56


@pytest.mark.parametrize("phase", [0, 5])
def test_action_set_rejects_bad_phase(phase):
    with pytest.raises(InvalidPhaseError):
        phase_action_set(phase)


def test_scramble_single_draw_equals_apply():
    f = generator("F")
    state, moves = scramble(np.random.default_rng(0), [f], 1)
    assert moves == [f]
    assert state == apply(solved(), f)


def test_scramble_is_deterministic_under_seed():
    a = scramble(np.random.default_rng(42), phase_action_set(1), 20)
    b = scramble(np.random.default_rng(42), phase_action_set(1), 20)
    assert a[0] == b[0]
    assert format_moves(a[1]) == format_moves(b[1])


def test_scramble_rejects_bad_arguments(rng):
    with pytest.raises(ValueError):
        scramble(rng, phase_action_set(1), 0)
    with pytest.raises(ValueError):
        scramble(rng, [], 3)


def test_parse_moves_notation():
    moves = parse_moves("F U' R2 Mx Mz' L:[[R,D]2,U]")
    assert format_moves(moves) == "F U' R2 Mx Mz' L:[[R,D]2,U]"
    assert sequence_transform(moves).key() == sequence_transform(
        [generator("F"), generator("U'"), square(generator("R")), slice_move("Mx"),
         slice_move("Mz'"), corner_pair_twister()]
    ).key()


def test_parse_named_edge_cycle_and_its_inverse():
    name = phase_action_set(4)[0].name
    move = parse_move(name)
    back = parse_move(move.inverse().name)
    assert compile_move(move).then(compile_move(back)).is_identity()


@pytest.mark.parametrize("text, index", [("F X", 1), ("f", 0), ("U''", 0), ("R2 Mq", 1)])
def test_parse_errors_carry_token_and_index(text, index):
    with pytest.raises(MoveParseError) as excinfo:
        parse_moves(text)
    assert excinfo.value.index == index
    assert excinfo.value.token == text.split()[index]


def test_group_property_report_passes():
    report = group_property_report()
    assert report.passed, report.to_text()
    assert report.digest == tables_digest()
    assert "checks passed" in report.to_text()


# (slot, translation, spin action) in cycle order: edge cycle, then corner cycle.
FACE_TURN_TABLES = {
    "U": [
        [(5, (1, -1, 0), "I"), (6, (-1, -1, 0), "I"), (7, (-1, 1, 0), "I"), (8, (1, 1, 0), "I")],
        [(17, (1, 0, 0), "I"), (18, (0, -1, 0), "I"), (19, (-1, 0, 0), "I"), (20, (0, 1, 0), "I")],
    ],
    "D": [
        [(1, (-1, -1, 0), "I"), (2, (1, -1, 0), "I"), (3, (1, 1, 0), "I"), (4, (-1, 1, 0), "I")],
        [(13, (0, -1, 0), "I"), (14, (1, 0, 0), "I"), (15, (0, 1, 0), "I"), (16, (-1, 0, 0), "I")],
    ],
    "B": [
        [(3, (-1, 0, 1), "x"), (12, (1, 0, 1), "x"), (7, (1, 0, -1), "x"), (10, (-1, 0, -1), "x")],
        [(14, (0, 0, 1), "A"), (20, (1, 0, 0), "C"), (19, (0, 0, -1), "A"), (15, (-1, 0, 0), "C")],
    ],
    "F": [
        [(1, (1, 0, 1), "x"), (9, (-1, 0, 1), "x"), (5, (-1, 0, -1), "x"), (11, (1, 0, -1), "x")],
        [(13, (1, 0, 0), "C"), (16, (0, 0, 1), "A"), (18, (-1, 0, 0), "C"), (17, (0, 0, -1), "A")],
    ],
    "L": [
        [(4, (0, -1, 1), "I"), (10, (0, 1, 1), "I"), (6, (0, 1, -1), "I"), (9, (0, -1, -1), "I")],
        [(15, (0, 0, 1), "A"), (19, (0, 1, 0), "C"), (18, (0, 0, -1), "A"), (16, (0, -1, 0), "C")],
    ],
    "R": [
        [(2, (0, 1, 1), "I"), (11, (0, -1, 1), "I"), (8, (0, -1, -1), "I"), (12, (0, 1, -1), "I")],
        [(13, (0, 0, 1), "A"), (17, (0, -1, 0), "C"), (20, (0, 0, -1), "A"), (14, (0, 1, 0), "C")],
    ],
}
SPIN_AFTER_ONE_TURN = {"I": 0, "x": -1, "A": 1, "C": -1}


@pytest.mark.parametrize("name", list(FACE_TURN_TABLES))
def test_face_turn_table_entries(name):
    spec = GENERATORS[name]
    actual = [[(e.slot, e.translation, e.action.value) for e in cycle] for cycle in spec.cycles]
    assert actual == FACE_TURN_TABLES[name]


@pytest.mark.parametrize("name", list(FACE_TURN_TABLES))
def test_face_turn_moves_each_cubie_as_tabled(name):
    state = apply(solved(), generator(name))
    for cycle in FACE_TURN_TABLES[name]:
        for i, (slot, translation, action) in enumerate(cycle):
            next_slot = cycle[(i + 1) % len(cycle)][0]
            assert state.cubie_at(next_slot) == slot
            assert state.disp_of(slot) == translation
            assert state.spin[slot - 1] == SPIN_AFTER_ONE_TURN[action]


def test_tables_digest_is_pinned():
    assert tables_digest() == "038ace657bd94a1b2ed9a9fbd4f09cebf41fe9fb42c8be1606e622adee23b6b7"
