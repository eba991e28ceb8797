"""
Sidebar UI component for the QUBE dashboard.
"""
import io
import json
import logging
from typing import Dict

import pandas as pd
import streamlit as st

from config import METRICS_COLUMNS, EVAL_COLUMNS, PHASES, PHASE_TITLES, get_default_run_data
from utils.data_helpers import eval_template, load_eval_csv, metrics_template, missing_columns, parse_metrics_text
from utils.pdf_generator import create_pdf

logger = logging.getLogger(__name__)


def render_sidebar() -> None:
    """Render the sidebar: run controls, data import and PDF export."""
    st.sidebar.title("QUBE Solver")

    st.sidebar.markdown("---")
    _render_run_controls()

    st.sidebar.markdown("---")
    _render_data_import()

    st.sidebar.markdown("---")
    _render_pdf_section()


def session_metrics() -> Dict[int, pd.DataFrame]:
    """Phase -> metrics DataFrame for every uploaded phase."""
    frames = {}
    for key, csv_text in st.session_state.run_data.get('metrics', {}).items():
        try:
            frames[int(key)] = parse_metrics_text(csv_text)
        except Exception as e:
            logger.error(f"Stored metrics for phase {key} are unreadable: {e}")
    return frames


def session_evaluation():
    csv_text = st.session_state.run_data.get('evaluation')
    if not csv_text:
        return None
    try:
        return load_eval_csv(io.StringIO(csv_text))
    except Exception as e:
        logger.error(f"Stored evaluation table is unreadable: {e}")
        return None


def _render_run_controls() -> None:
    """New / save / load of the dashboard run."""
    st.sidebar.subheader("Run Controls")

    def reset_run_data():
        st.session_state.run_data = get_default_run_data()
        st.session_state.name_input = st.session_state.run_data['name']
        if 'generated_pdf_bytes' in st.session_state:
            del st.session_state.generated_pdf_bytes

    st.sidebar.button("📄 New Run", width="stretch", on_click=reset_run_data)

    st.sidebar.download_button(
        "💾 Save Run",
        data=json.dumps(st.session_state.run_data, indent=4),
        file_name=f"{st.session_state.run_data['name'].replace(' ', '_')}_run.json",
        mime="application/json",
        width="stretch"
    )

    if st.sidebar.button("📂 Load Run", width="stretch"):
        st.session_state.show_load_run = not st.session_state.get('show_load_run', False)

    if st.session_state.get('show_load_run'):
        load_file = st.sidebar.file_uploader("Upload Run JSON", type=['json'], key="load_run_uploader")
        if load_file:
            try:
                d = json.load(load_file)
                run_data = get_default_run_data()
                run_data.update(d)
                st.session_state.run_data = run_data
                st.session_state.name_input = run_data['name']
                st.session_state.show_load_run = False
                st.success("Run loaded!")
                st.rerun()
            except Exception as e:
                st.error(f"Invalid run file: {e}")


def _render_data_import() -> None:
    """Metrics and evaluation CSV upload with templates."""
    st.sidebar.title("Data Import")
    st.sidebar.caption("Upload the CSVs written by `cli.py train --metrics` and `cli.py eval --out`.")

    st.sidebar.markdown("**📈 Training Metrics**")
    phase = st.sidebar.selectbox(
        "Phase",
        options=list(PHASES),
        format_func=lambda p: f"{p} - {PHASE_TITLES[p]}",
        key="import_phase_select"
    )
    st.sidebar.download_button(
        label="Template",
        data=metrics_template(),
        file_name="metrics_template.csv",
        mime="text/csv",
        key="dl_metrics_template",
        width="stretch"
    )
    metrics_file = st.sidebar.file_uploader("Upload Metrics CSV", type=['csv'], key="metrics_csv_uploader")
    if metrics_file:
        _import_metrics(metrics_file, phase)

    st.sidebar.markdown("**🎯 Evaluation**")
    st.sidebar.download_button(
        label="Template",
        data=eval_template(),
        file_name="eval_template.csv",
        mime="text/csv",
        key="dl_eval_template",
        width="stretch"
    )
    eval_file = st.sidebar.file_uploader("Upload Evaluation CSV", type=['csv'], key="eval_csv_uploader")
    if eval_file:
        _import_evaluation(eval_file)


def _import_metrics(metrics_file, phase: int) -> None:
    try:
        csv_text = metrics_file.getvalue().decode('utf-8')
        df = pd.read_csv(io.StringIO(csv_text))
        missing_cols = missing_columns(df, METRICS_COLUMNS)
        if missing_cols:
            st.sidebar.error(f"Missing required columns: {missing_cols}")
            return
        if st.sidebar.button(f"✅ Import as Phase {phase}", key="import_metrics_btn", type="primary"):
            st.session_state.run_data['metrics'][str(phase)] = csv_text
            st.sidebar.success(f"Imported {len(df)} episodes for phase {phase}!")
            st.rerun()
    except Exception as e:
        st.sidebar.error(f"Error reading CSV: {e}")


def _import_evaluation(eval_file) -> None:
    try:
        csv_text = eval_file.getvalue().decode('utf-8')
        df = pd.read_csv(io.StringIO(csv_text))
        missing_cols = missing_columns(df, EVAL_COLUMNS)
        if missing_cols:
            st.sidebar.error(f"Missing required columns: {missing_cols}")
            return
        if st.sidebar.button("✅ Import Evaluation", key="import_eval_btn", type="primary"):
            st.session_state.run_data['evaluation'] = csv_text
            st.sidebar.success(f"Imported {len(df)} scramble lengths!")
            st.rerun()
    except Exception as e:
        st.sidebar.error(f"Error reading CSV: {e}")


def _render_pdf_section() -> None:
    """PDF export of the loaded metrics and evaluation."""
    metrics = session_metrics()
    evaluation = session_evaluation()
    if not metrics and evaluation is None:
        st.sidebar.warning("No data to generate report.")
        return

    st.sidebar.title("Export Report")
    try:
        with st.spinner("Generating Report..."):
            pdf_payload = create_pdf(st.session_state.run_data, metrics, evaluation)
        st.sidebar.download_button(
            label="📄 Export PDF Report",
            data=pdf_payload,
            file_name="qube_report.pdf",
            mime="application/pdf",
            width="stretch",
            type="primary"
        )
    except Exception as e:
        logger.error(f"Report generation failed: {e}")
        st.sidebar.error(f"Failed to generate report: {e}")
