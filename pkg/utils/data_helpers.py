"""
Data helper utilities for training metrics and evaluation tables.
"""
import io
import logging
from typing import Any, Dict, List, Optional, Union

import pandas as pd
import streamlit as st

from config import EVAL_COLUMNS, METRICS_COLUMNS, MOVING_WINDOW

logger = logging.getLogger(__name__)

CsvSource = Union[str, io.IOBase]


def missing_columns(df: pd.DataFrame, required: List[str]) -> List[str]:
    return [c for c in required if c not in df.columns]


def load_metrics_csv(source: CsvSource) -> pd.DataFrame:
    """
    Read a per-episode training metrics CSV.

    Args:
        source: Path or file-like object

    Returns:
        DataFrame with at least METRICS_COLUMNS, ``solved`` as bool

    Raises:
        ValueError: If required columns are missing
    """
    df = pd.read_csv(source)
    missing = missing_columns(df, METRICS_COLUMNS)
    if missing:
        raise ValueError(f"Metrics CSV is missing columns: {', '.join(missing)}")
    df['solved'] = df['solved'].astype(str).str.lower().isin(['true', '1'])
    return df


def load_eval_csv(source: CsvSource) -> pd.DataFrame:
    df = pd.read_csv(source)
    missing = missing_columns(df, EVAL_COLUMNS)
    if missing:
        raise ValueError(f"Evaluation CSV is missing columns: {', '.join(missing)}")
    return df.sort_values('scramble_len').reset_index(drop=True)


@st.cache_data
def parse_metrics_text(csv_text: str) -> pd.DataFrame:
    """Cached parse of uploaded metrics (text keeps the cache key stable)."""
    return load_metrics_csv(io.StringIO(csv_text))


def add_moving_averages(df: pd.DataFrame, window: int = MOVING_WINDOW) -> pd.DataFrame:
    """Copy of ``df`` with ``moving_success`` and ``moving_steps`` columns."""
    out = df.copy()
    out['moving_success'] = out['solved'].astype(float).rolling(window, min_periods=1).mean()
    out['moving_steps'] = out['steps'].rolling(window, min_periods=1).mean()
    return out


def episodes_to_reach(df: pd.DataFrame, threshold: float, window: int = MOVING_WINDOW) -> Optional[int]:
    """
    First episode at which the moving success rate reaches ``threshold``.

    Only windows that are full count, so a lucky first episode does not.
    """
    if df.empty:
        return None
    moving = df['solved'].astype(float).rolling(window, min_periods=min(window, len(df))).mean()
    hits = df.loc[moving >= threshold, 'episode']
    return int(hits.iloc[0]) if not hits.empty else None


def training_summary(df: pd.DataFrame, window: int = MOVING_WINDOW) -> Dict[str, Any]:
    """Headline numbers of one phase's training run."""
    if df.empty:
        return {'episodes': 0, 'success_rate': 0.0, 'final_moving_success': 0.0,
                'mean_steps_solved': 0.0, 'final_epsilon': None}
    moving = add_moving_averages(df, window)['moving_success']
    solved = df[df['solved']]
    return {
        'episodes': len(df),
        'success_rate': float(df['solved'].mean()),
        'final_moving_success': float(moving.iloc[-1]),
        'mean_steps_solved': float(solved['steps'].mean()) if not solved.empty else 0.0,
        'final_epsilon': float(df['epsilon'].iloc[-1]),
    }


def overall_success(eval_df: pd.DataFrame) -> float:
    """Episode-weighted total success over all scramble lengths."""
    if eval_df.empty or eval_df['episodes'].sum() == 0:
        return 0.0
    return float((eval_df['total_success'] * eval_df['episodes']).sum() / eval_df['episodes'].sum())


def metrics_template() -> str:
    return pd.DataFrame([{
        'episode': 1, 'scramble_len': 3, 'steps': 2, 'solved': True,
        'cum_reward': 4998.0, 'final_energy': 0.0, 'epsilon': 1.0,
    }], columns=METRICS_COLUMNS).to_csv(index=False)


def eval_template() -> str:
    return pd.DataFrame([{
        'scramble_len': 1, 'episodes': 100, 'phase1_success': 1.0, 'phase2_success': 1.0,
        'phase3_success': 0.98, 'phase4_success': 0.97, 'total_success': 0.95, 'mean_moves': 12.4,
    }], columns=EVAL_COLUMNS).to_csv(index=False)
