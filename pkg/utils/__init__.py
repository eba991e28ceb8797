"""Utility functions for the QUBE solver tools."""
from utils.pdf_generator import create_pdf
from utils.data_helpers import load_eval_csv, load_metrics_csv, training_summary
from utils.run_config import RunConfig, load_run_config

__all__ = [
    'create_pdf',
    'load_eval_csv',
    'load_metrics_csv',
    'training_summary',
    'RunConfig',
    'load_run_config',
]
