"""UI components for the QUBE dashboard."""
from components.sidebar import render_sidebar
from components.statistics import render_statistics
from components.evaluation_view import render_evaluation_view
from components.solve_view import render_solve_view

__all__ = [
    'render_sidebar',
    'render_statistics',
    'render_evaluation_view',
    'render_solve_view',
]
