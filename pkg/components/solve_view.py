"""
Solver view: scramble a cube, run the trained phases and step through the result.
"""
import logging
from typing import Dict, List, Tuple

import streamlit as st

from config import PHASE_TITLES
from qube import QubeError
from qube.cube_core import CubeState, solved
from qube.net_diagram import render_net
from qube.neural import MLPModel
from qube.pipeline import default_configs, load_phase_models, solve
from qube.rubik_group import Move, apply_sequence, format_moves, parse_moves

logger = logging.getLogger(__name__)

TraceStep = Tuple[int, str, CubeState]


@st.cache_resource
def _cached_models(models_dir: str) -> Dict[int, MLPModel]:
    return load_phase_models(models_dir)


def render_solve_view() -> None:
    """Render the solver tab content."""
    st.subheader("Solver")

    col_in, col_dir = st.columns([3, 2])
    with col_in:
        scramble_text = st.text_input("Scramble", value="U R F' D2 L", key="scramble_input",
                                      help="Face turns (U, U', U2, ...), slices (Mx) or named macros")
    with col_dir:
        models_dir = st.text_input("Models directory", value=st.session_state.run_data.get('models_dir', 'models'),
                                   key="models_dir_input")
        st.session_state.run_data['models_dir'] = models_dir

    if st.button("🧩 Solve", type="primary"):
        try:
            st.session_state.solve_trace = _run_solve(scramble_text, models_dir)
        except QubeError as e:
            logger.error(f"Solve failed: {e}")
            st.error(str(e))
            st.session_state.solve_trace = None

    trace = st.session_state.get('solve_trace')
    if trace:
        _render_trace(trace)


def _run_solve(scramble_text: str, models_dir: str) -> Dict:
    moves: List[Move] = parse_moves(scramble_text)
    start = apply_sequence(solved(), moves)
    models = _cached_models(models_dir)
    steps: List[TraceStep] = [(0, "start", start)]

    def on_move(phase: int, move: Move, state: CubeState) -> None:
        steps.append((phase, str(move), state))

    result = solve(start, models, default_configs(), scramble_len=len(moves), on_move=on_move)
    return {
        'steps': steps,
        'success': result.success,
        'failure_phase': result.failure_phase,
        'phase_moves': {p: format_moves(m) for p, m in result.phase_moves.items()},
    }


def _render_trace(trace: Dict) -> None:
    steps = trace['steps']
    if trace['success']:
        st.success(f"Solved in {len(steps) - 1} moves")
    else:
        phase = trace['failure_phase']
        st.error(f"Phase {phase} ({PHASE_TITLES.get(phase, '')}) did not reach its goal")

    for phase, text in trace['phase_moves'].items():
        st.markdown(f"**Phase {phase}:** `{text or '-'}`")

    if len(steps) > 1:
        index = st.slider("Step", min_value=0, max_value=len(steps) - 1, value=len(steps) - 1, key="trace_step")
    else:
        index = 0
    phase, label, state = steps[index]
    st.caption(f"Step {index}: {label}" + (f" (phase {phase})" if phase else ""))
    st.code(render_net(state), language=None)
