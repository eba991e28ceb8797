"""
Training statistics component for the QUBE dashboard.
"""
import logging

import pandas as pd
import streamlit as st

from components.sidebar import session_metrics
from config import MOVING_WINDOW, PHASE_TITLES, PHASES
from utils import charts
from utils.data_helpers import episodes_to_reach, training_summary

logger = logging.getLogger(__name__)


def render_statistics() -> None:
    """Render the training tab: one panel per uploaded phase."""
    st.subheader("Training Statistics")

    metrics = session_metrics()
    if not metrics:
        st.info("No training metrics loaded. Upload a metrics CSV from the sidebar.")
        return

    window = st.slider("Moving window (episodes)", min_value=10, max_value=1000,
                       value=MOVING_WINDOW, step=10, key="moving_window_slider")

    for phase in PHASES:
        if phase not in metrics:
            continue
        _render_phase_stats(phase, metrics[phase], window)
        st.divider()


def _render_phase_stats(phase: int, df: pd.DataFrame, window: int) -> None:
    st.markdown(f"### Phase {phase}: {PHASE_TITLES[phase]}")

    if df.empty:
        st.info("No episodes recorded.")
        return

    summary = training_summary(df, window)
    reached = episodes_to_reach(df, 0.95, window)

    c1, c2, c3, c4 = st.columns(4)
    c1.metric("Episodes", summary['episodes'])
    c2.metric("Success", f"{summary['success_rate']:.1%}")
    c3.metric("Final Moving Success", f"{summary['final_moving_success']:.1%}")
    c4.metric("95% Reached At", reached if reached is not None else "—")

    left, right = st.columns(2)
    with left:
        _render_figure(charts.training_curve_figure(df, phase, window), "success curve")
    with right:
        _render_figure(charts.steps_figure(df, phase, window), "steps chart")


def _render_figure(fig, label: str) -> None:
    try:
        st.pyplot(fig)
    except Exception as e:
        logger.error(f"Failed to render {label}: {e}")
        st.warning(f"Could not render {label}.")
    finally:
        charts.close(fig)
