import pandas as pd
import pytest

from config import EVAL_COLUMNS, PHASES
from qube.cube_core import solved
from qube.errors import DimensionError, QubeError
from qube.neural import init_model, save_model
from qube.pipeline import evaluate_full, load_phase_models, model_path, solve
from qube.rubik_group import apply, apply_sequence, generator

from conftest import constant_model


def test_solve_solved_state_takes_no_moves(constant_models, configs):
    result = solve(solved(), constant_models, configs)
    assert result.success
    assert result.total_moves == 0
    assert all(result.phase_success[p] for p in PHASES)


def test_solve_single_u_prime_needs_only_phase_3(constant_models, configs):
    start = apply(solved(), generator("U'"))
    steps = []
    result = solve(start, constant_models, configs, scramble_len=1,
                   on_move=lambda phase, move, state: steps.append((phase, move.name)))
    assert result.success
    assert steps == [(3, "U")]
    assert result.phase_moves[1] == [] and result.phase_moves[2] == []
    assert result.phase_moves[4] == []
    assert apply_sequence(start, result.moves) == solved()


def test_solve_stops_at_failing_phase(constant_models, configs):
    # phase 1 keeps playing U, which never unflips the F edges
    start = apply(solved(), generator("F"))
    result = solve(start, constant_models, configs, scramble_len=1)
    assert not result.success
    assert result.failure_phase == 1
    assert len(result.phase_moves[1]) == configs[1].max_steps(1)
    assert 2 not in result.phase_moves


def test_solve_rejects_mismatched_models(constant_models, configs, rng):
    models = dict(constant_models)
    models[2] = init_model((4, 35, 16, 4), rng)
    with pytest.raises(DimensionError):
        solve(solved(), models, configs)
    models = dict(constant_models)
    models[3] = constant_model(configs[3])
    models[3].phase = 4
    with pytest.raises(DimensionError):
        solve(solved(), models, configs)
    with pytest.raises(DimensionError):
        solve(solved(), {1: constant_models[1]}, configs)


def test_evaluate_full_is_independent_of_workers(constant_models, configs):
    serial = evaluate_full(constant_models, configs, n=12, max_scramble=3, seed=9, workers=1)
    threaded = evaluate_full(constant_models, configs, n=12, max_scramble=3, seed=9, workers=4)
    pd.testing.assert_frame_equal(serial.table, threaded.table)
    assert [o.success for o in serial.outcomes] == [o.success for o in threaded.outcomes]


def test_evaluate_full_sweeps_scramble_lengths(constant_models, configs):
    report = evaluate_full(constant_models, configs, n=9, max_scramble=3, seed=0, workers=1)
    assert list(report.table.columns) == EVAL_COLUMNS
    assert report.table['scramble_len'].tolist() == [1, 2, 3]
    assert report.table['episodes'].tolist() == [3, 3, 3]
    assert 0.0 <= report.total_success <= 1.0
    # every episode attempts phase 1
    assert all(1 in o.phase_success for o in report.outcomes)


def test_evaluate_full_rejects_bad_range(constant_models, configs):
    with pytest.raises(ValueError):
        evaluate_full(constant_models, configs, n=2, max_scramble=1, min_scramble=2)


def test_eval_report_csv(constant_models, configs, tmp_path):
    report = evaluate_full(constant_models, configs, n=4, max_scramble=2, seed=1, workers=2)
    path = tmp_path / "eval.csv"
    report.to_csv(str(path))
    assert list(pd.read_csv(path).columns) == EVAL_COLUMNS


def test_load_phase_models(tmp_path, constant_models):
    for phase, model in constant_models.items():
        save_model(model, model_path(str(tmp_path), phase), phase)
    models = load_phase_models(str(tmp_path))
    assert sorted(models) == list(PHASES)
    assert models[4].layer_dims == constant_models[4].layer_dims

    (tmp_path / "phase4.qube").unlink()
    with pytest.raises(QubeError):
        load_phase_models(str(tmp_path))
