"""
Configuration constants and settings for the QUBE cube solver.
"""
import os
from datetime import date
from typing import Any, Dict, List, Tuple

# --- Asset Paths ---
ASSETS_DIR = "assets"
FONTS_DIR = os.path.join(ASSETS_DIR, "fonts")
APTOS_REGULAR = os.path.join(FONTS_DIR, "Aptos.ttf")
APTOS_BOLD = os.path.join(FONTS_DIR, "Aptos-Bold.ttf")
APTOS_ITALIC = os.path.join(FONTS_DIR, "Aptos-Italic.ttf")
APTOS_BOLD_ITALIC = os.path.join(FONTS_DIR, "Aptos-Bold-Italic.ttf")

# --- Phases ---
PHASES: Tuple[int, ...] = (1, 2, 3, 4)
PHASE_TITLES: Dict[int, str] = {
    1: "Orient edges",
    2: "Orient corners",
    3: "Position corners",
    4: "Position edges",
}

# --- Network Layouts ---
# (input, hidden1, hidden2, output)
LAYER_DIMS: Dict[int, Tuple[int, int, int, int]] = {
    1: (12, 100, 50, 12),
    2: (4, 35, 16, 3),
    3: (24, 200, 100, 8),
    4: (36, 310, 115, 56),
}

# --- Training Defaults ---
DEFAULT_LEARNING_RATE: float = 0.0001
DEFAULT_PREMIUM: float = 5000.0
DEFAULT_TARGET_UPDATE_EVERY: int = 100
DEFAULT_BATCH_SIZE: int = 1240
DEFAULT_MEMORY_SIZE: int = 10_000
DEFAULT_MIN_SCRAMBLE: int = 1
DEFAULT_MAX_SCRAMBLE: int = 50
DEFAULT_GAMMA: float = 0.9
DEFAULT_EPSILON_FLOOR: float = 0.05
DEFAULT_LOG_EVERY: int = 100
MOVING_WINDOW: int = 100

# Adam
ADAM_BETA1: float = 0.9
ADAM_BETA2: float = 0.999
ADAM_EPSILON: float = 1e-8

PHASE_HYPERPARAMETERS: Dict[int, Dict[str, Any]] = {
    1: {"random_action_decay": 0.9995, "step_rule": "plus5"},
    2: {"random_action_decay": 0.9995, "step_rule": "plus5"},
    3: {"random_action_decay": 0.999995, "step_rule": "times2"},
    4: {"random_action_decay": 0.9995, "step_rule": "plus5"},
}

DEFAULT_TRAIN_EPISODES: int = 10_000
DEFAULT_TARGET_SUCCESS: float = 0.90

# --- Evaluation ---
DEFAULT_EVAL_EPISODES: int = 1000
DEFAULT_EVAL_WORKERS: int = 4

# --- File Layout ---
DEFAULT_MODELS_DIR = "models"
MODEL_FILE_TEMPLATE = "phase{phase}.qube"
MODEL_MAGIC = b"QUBEMLP1"

# --- CSV Columns ---
METRICS_COLUMNS: List[str] = [
    "episode", "scramble_len", "steps", "solved", "cum_reward", "final_energy", "epsilon",
]
EVAL_COLUMNS: List[str] = [
    "scramble_len", "episodes",
    "phase1_success", "phase2_success", "phase3_success", "phase4_success",
    "total_success", "mean_moves",
]

# --- Custom CSS ---
CUSTOM_CSS = """
<style>
    @import url('https://fonts.googleapis.com/css2?family=Inter:wght@300;400;500;600;700&display=swap');

    html, body, [class*="css"], .stMarkdown, .stText, .stMetric, .stDataFrame,
    .stSelectbox, .stTextInput, .stButton, .stRadio, .stCheckbox, .stCaption,
    h1, h2, h3, h4, h5, h6, p, td, th {
        font-family: 'Aptos', 'Inter', -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif !important;
    }

    /* Net diagrams need a fixed-width font */
    .stCode, pre, code {
        font-family: 'JetBrains Mono', 'Consolas', monospace !important;
    }

    .stMainBlockContainer {
        padding-top: 1rem !important;
        padding-bottom: 1rem !important;
        padding-left: 3rem !important;
        padding-right: 3rem !important;
    }
</style>
"""


def get_default_run_data() -> dict:
    """Return default dashboard session data."""
    return {
        'name': 'QUBE run',
        'author': '',
        'date': str(date.today()),
        'metrics': {},
        'evaluation': None,
        'models_dir': DEFAULT_MODELS_DIR,
        'seed': 0,
    }
