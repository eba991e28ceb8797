"""
QUBE Dashboard - Main Application

A Streamlit front end for the four-phase cube solver: inspect training
curves, compare evaluation sweeps and step through solves of your own
scrambles with trained models.
"""
import logging

import streamlit as st

from config import CUSTOM_CSS, get_default_run_data
from components import (
    render_sidebar,
    render_statistics,
    render_evaluation_view,
    render_solve_view
)

# --- Logging Configuration ---
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# --- Page Configuration ---
st.set_page_config(layout="wide", page_title="QUBE Dashboard")

# --- Custom CSS ---
st.markdown(CUSTOM_CSS, unsafe_allow_html=True)


# =============================================================================
# Session State Initialization
# =============================================================================

if 'run_data' not in st.session_state:
    st.session_state.run_data = get_default_run_data()

if 'solve_trace' not in st.session_state:
    st.session_state.solve_trace = None


# =============================================================================
# Sidebar
# =============================================================================

render_sidebar()


# =============================================================================
# App Header & Inputs
# =============================================================================

st.title("QUBE Dashboard")

c1, c2 = st.columns(2, vertical_alignment="center")
with c1:
    st.text_input("Run name", value=st.session_state.run_data['name'], key="name_input")
    st.session_state.run_data['name'] = st.session_state.name_input
with c2:
    st.text_input("Author", value=st.session_state.run_data.get('author', ''), key="author_input")
    st.session_state.run_data['author'] = st.session_state.author_input


# =============================================================================
# Tabs
# =============================================================================

tab_train, tab_eval, tab_solve = st.tabs([
    "📈 Training",
    "🎯 Evaluation",
    "🧩 Solver"
])

with tab_train:
    render_statistics()

with tab_eval:
    render_evaluation_view()

with tab_solve:
    @st.fragment
    def _solve_fragment():
        render_solve_view()

    _solve_fragment()
