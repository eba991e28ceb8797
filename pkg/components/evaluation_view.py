"""
Evaluation view: success against scramble length for the full solver.
"""
import logging

import streamlit as st

from components.sidebar import session_evaluation
from config import PHASES
from utils import charts
from utils.data_helpers import overall_success

logger = logging.getLogger(__name__)


def render_evaluation_view() -> None:
    """Render the evaluation tab content."""
    st.subheader("Full Solver Evaluation")

    eval_df = session_evaluation()
    if eval_df is None or eval_df.empty:
        st.info("No evaluation loaded. Run `cli.py eval --out eval.csv` and upload the result.")
        return

    episodes = int(eval_df['episodes'].sum())
    c1, c2, c3 = st.columns(3)
    c1.metric("Episodes", episodes)
    c2.metric("Total Success", f"{overall_success(eval_df):.1%}")
    c3.metric("Longest Scramble", int(eval_df['scramble_len'].max()))

    fig = charts.eval_figure(eval_df)
    try:
        st.pyplot(fig)
    except Exception as e:
        logger.error(f"Failed to render evaluation chart: {e}")
        st.warning("Could not render evaluation chart.")
    finally:
        charts.close(fig)

    col_config = {
        "scramble_len": st.column_config.NumberColumn("Scramble", format="%d"),
        "episodes": st.column_config.NumberColumn("Episodes", format="%d"),
        "total_success": st.column_config.ProgressColumn("Total", min_value=0.0, max_value=1.0, format="percent"),
        "mean_moves": st.column_config.NumberColumn("Mean Moves", format="%.1f"),
    }
    for phase in PHASES:
        col_config[f"phase{phase}_success"] = st.column_config.NumberColumn(f"Phase {phase}", format="percent")

    st.dataframe(eval_df, column_config=col_config, hide_index=True, width="stretch")
