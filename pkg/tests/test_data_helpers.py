import io

import pandas as pd
import pytest

from config import EVAL_COLUMNS, METRICS_COLUMNS
from utils import charts
from utils.data_helpers import (
    add_moving_averages,
    episodes_to_reach,
    eval_template,
    load_eval_csv,
    load_metrics_csv,
    metrics_template,
    overall_success,
    training_summary,
)
from utils.pdf_generator import create_pdf


def _metrics(solved_flags):
    n = len(solved_flags)
    return pd.DataFrame({
        'episode': range(1, n + 1),
        'scramble_len': [3] * n,
        'steps': [2 if s else 8 for s in solved_flags],
        'solved': solved_flags,
        'cum_reward': [4998.0 if s else -40.0 for s in solved_flags],
        'final_energy': [0.0 if s else 4.0 for s in solved_flags],
        'epsilon': [0.5] * n,
    }, columns=METRICS_COLUMNS)


def _eval_table():
    return pd.DataFrame([
        {'scramble_len': 2, 'episodes': 30, 'phase1_success': 1.0, 'phase2_success': 1.0,
         'phase3_success': 1.0, 'phase4_success': 0.9, 'total_success': 0.9, 'mean_moves': 6.0},
        {'scramble_len': 1, 'episodes': 10, 'phase1_success': 1.0, 'phase2_success': 1.0,
         'phase3_success': 1.0, 'phase4_success': 0.5, 'total_success': 0.5, 'mean_moves': 3.0},
    ], columns=EVAL_COLUMNS)


def test_metrics_template_loads():
    df = load_metrics_csv(io.StringIO(metrics_template()))
    assert list(df.columns) == METRICS_COLUMNS
    assert df['solved'].dtype == bool
    assert df['solved'].iloc[0]


def test_solved_column_accepts_numeric_flags():
    text = metrics_template().replace("True", "0")
    assert not load_metrics_csv(io.StringIO(text))['solved'].iloc[0]


def test_missing_columns_are_reported():
    with pytest.raises(ValueError, match="epsilon"):
        load_metrics_csv(io.StringIO("episode,scramble_len,steps,solved,cum_reward,final_energy\n1,1,1,True,1,0\n"))
    with pytest.raises(ValueError, match="mean_moves"):
        load_eval_csv(io.StringIO(eval_template().replace("mean_moves", "moves")))


def test_eval_csv_is_sorted_by_length():
    buf = io.StringIO(_eval_table().to_csv(index=False))
    assert load_eval_csv(buf)['scramble_len'].tolist() == [1, 2]


def test_moving_averages():
    df = add_moving_averages(_metrics([True, False, True, True]), window=2)
    assert df['moving_success'].tolist() == [1.0, 0.5, 0.5, 1.0]
    assert df['moving_steps'].tolist() == [2.0, 5.0, 5.0, 2.0]


def test_episodes_to_reach_needs_a_full_window():
    df = _metrics([True, False, True, True, True])
    assert episodes_to_reach(df, 1.0, window=3) == 5
    assert episodes_to_reach(df, 0.6, window=3) == 3
    assert episodes_to_reach(_metrics([False] * 4), 0.5, window=2) is None
    assert episodes_to_reach(_metrics([]), 0.5) is None


def test_training_summary():
    summary = training_summary(_metrics([False, True, True, True]), window=2)
    assert summary['episodes'] == 4
    assert summary['success_rate'] == 0.75
    assert summary['final_moving_success'] == 1.0
    assert summary['mean_steps_solved'] == 2.0
    assert summary['final_epsilon'] == 0.5
    assert training_summary(_metrics([]))['episodes'] == 0


def test_overall_success_is_episode_weighted():
    assert overall_success(_eval_table()) == pytest.approx((0.9 * 30 + 0.5 * 10) / 40)
    assert overall_success(_eval_table().iloc[0:0]) == 0.0


def test_charts_build_figures():
    df = _metrics([True, False, True])
    for fig in (charts.training_curve_figure(df, 1), charts.steps_figure(df, 1),
                charts.eval_figure(_eval_table())):
        assert fig.axes
        charts.close(fig)


def test_pdf_report_bytes():
    run_data = {'name': 'smoke run', 'author': 'tester'}
    payload = create_pdf(run_data, {1: _metrics([True, False, True])}, _eval_table())
    assert payload.startswith(b"%PDF")
    assert create_pdf(run_data, {}, None).startswith(b"%PDF")
