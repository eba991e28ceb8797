"""
Matplotlib figures shared by the dashboard and the PDF report.
"""
import logging

import matplotlib
matplotlib.use('Agg')  # Non-interactive backend for thread safety
import matplotlib.pyplot as plt
from matplotlib.figure import Figure
from matplotlib.ticker import MaxNLocator, PercentFormatter
import pandas as pd

from config import MOVING_WINDOW, PHASE_TITLES, PHASES
from utils.data_helpers import add_moving_averages

logger = logging.getLogger(__name__)

PHASE_COLORS = {1: '#1f77b4', 2: '#2ca02c', 3: '#ff7f0e', 4: '#9467bd'}


def training_curve_figure(df: pd.DataFrame, phase: int, window: int = MOVING_WINDOW) -> Figure:
    """Moving success rate against episode, with the 100% line in red."""
    data = add_moving_averages(df, window)
    with plt.ioff():
        fig, ax = plt.subplots(figsize=(6, 3))
        ax.plot(data['episode'], data['moving_success'], color=PHASE_COLORS.get(phase, 'black'), linewidth=1.2)
        ax.axhline(1.0, color='red', linestyle='--', linewidth=0.8)
        ax.set_ylim(0, 1.05)
        ax.yaxis.set_major_formatter(PercentFormatter(1.0))
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("Episode")
        ax.set_ylabel(f"Success ({window}-episode window)")
        ax.set_title(f"Phase {phase}: {PHASE_TITLES.get(phase, '')}")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
    return fig


def steps_figure(df: pd.DataFrame, phase: int, window: int = MOVING_WINDOW) -> Figure:
    """Steps per episode (faint) with the moving average."""
    data = add_moving_averages(df, window)
    with plt.ioff():
        fig, ax = plt.subplots(figsize=(6, 2.5))
        ax.plot(data['episode'], data['steps'], color='#cccccc', linewidth=0.6)
        ax.plot(data['episode'], data['moving_steps'], color=PHASE_COLORS.get(phase, 'black'), linewidth=1.2)
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("Episode")
        ax.set_ylabel("Steps")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
    return fig


def eval_figure(eval_df: pd.DataFrame) -> Figure:
    """Success against scramble length: phases dashed, total solid."""
    with plt.ioff():
        fig, ax = plt.subplots(figsize=(6, 3.2))
        for phase in PHASES:
            ax.plot(
                eval_df['scramble_len'], eval_df[f'phase{phase}_success'],
                linestyle='--', linewidth=1, color=PHASE_COLORS[phase], label=f"Phase {phase}",
            )
        ax.plot(eval_df['scramble_len'], eval_df['total_success'], color='black', linewidth=1.8, label="Total")
        ax.set_ylim(0, 1.05)
        ax.yaxis.set_major_formatter(PercentFormatter(1.0))
        ax.xaxis.set_major_locator(MaxNLocator(integer=True))
        ax.set_xlabel("Scramble length")
        ax.set_ylabel("Solved")
        ax.legend(fontsize=7, loc='lower left')
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
    return fig


def close(fig: Figure) -> None:
    plt.close(fig)
