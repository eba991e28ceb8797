"""
PDF report generation utilities.
"""
import logging
import os
import tempfile
from datetime import date
from typing import Any, Dict, Optional, Sequence, Tuple

import pandas as pd
from fpdf import FPDF
from matplotlib.figure import Figure

from config import APTOS_BOLD, APTOS_BOLD_ITALIC, APTOS_ITALIC, APTOS_REGULAR, PHASE_TITLES, PHASES
from utils import charts
from utils.data_helpers import overall_success, training_summary

logger = logging.getLogger(__name__)

BRAND_FONT = "Aptos"
FALLBACK_FONT = "Arial"
BRAND_FONT_FILES: Dict[str, str] = {
    '': APTOS_REGULAR,
    'B': APTOS_BOLD,
    'I': APTOS_ITALIC,
    'BI': APTOS_BOLD_ITALIC,
}

EVAL_TABLE_LAYOUT: Sequence[Tuple[str, int]] = (
    ("Len", 15), ("N", 20), ("Ph 1", 22), ("Ph 2", 22), ("Ph 3", 22), ("Ph 4", 22), ("Total", 25), ("Moves", 22),
)


class ReportPDF(FPDF):
    """Report page with a brand font (when its files are present) and a page-numbered footer."""

    def __init__(self, font_name: str = FALLBACK_FONT, **kwargs):
        super().__init__(**kwargs)
        self.report_font = font_name
        self.styles = {''}
        if font_name == BRAND_FONT:
            for style, path in BRAND_FONT_FILES.items():
                self._register(style, path)

    def _register(self, style: str, path: str) -> None:
        if not os.path.exists(path):
            return
        try:
            self.add_font(BRAND_FONT, style, path, uni=True)
            self.styles.add(style)
        except Exception as e:
            logger.error(f"Failed to register {BRAND_FONT} '{style}' from {path}: {e}")

    def use_font(self, style: str = '', size: float = 0) -> None:
        """Switch font; unregistered styles use the regular face, then Arial."""
        try:
            self.set_font(self.report_font, style if style in self.styles else '', size)
        except Exception:
            self.set_font(FALLBACK_FONT, style if style in BRAND_FONT_FILES else '', size)

    def section(self, title: str) -> None:
        self.use_font('B', 14)
        self.set_fill_color(50, 50, 50)
        self.set_text_color(255, 255, 255)
        self.cell(0, 10, f"  {title}", ln=True, fill=True)
        self.set_text_color(0, 0, 0)
        self.ln(2)

    def stat_row(self, items: Sequence[str], width: float = 60) -> None:
        """One line of label/value cells."""
        self.use_font('', 10)
        for i, text in enumerate(items):
            self.cell(width, 8, text, ln=i == len(items) - 1)

    def footer(self):
        self.set_y(-10)
        self.use_font('I', 8)
        self.set_text_color(128, 128, 128)
        self.cell(0, 10, f'QUBE training report - Page {self.page_no()}', align='C')


def create_pdf(
    run_data: Dict[str, Any],
    metrics: Dict[int, pd.DataFrame],
    eval_df: Optional[pd.DataFrame] = None,
) -> bytes:
    """
    Build the training/evaluation report. Tries the brand font, falls back to Arial.

    Args:
        run_data: Run name and author
        metrics: Phase -> per-episode metrics DataFrame
        eval_df: Per-scramble-length evaluation table

    Returns:
        PDF file contents
    """
    font = BRAND_FONT if all(os.path.exists(BRAND_FONT_FILES[s]) for s in ('', 'B')) else FALLBACK_FONT
    try:
        return _build_pdf(run_data, metrics, eval_df, font)
    except Exception as e:
        if font == FALLBACK_FONT:
            raise
        logger.error(f"PDF generation failed with font {font}: {e}. Falling back to {FALLBACK_FONT}.")
        return _build_pdf(run_data, metrics, eval_df, FALLBACK_FONT)


def _build_pdf(
    run_data: Dict[str, Any],
    metrics: Dict[int, pd.DataFrame],
    eval_df: Optional[pd.DataFrame],
    font_name: str,
) -> bytes:
    pdf = ReportPDF(font_name=font_name)
    _add_title_page(pdf, run_data)

    for phase in PHASES:
        df = metrics.get(phase)
        if df is None or df.empty:
            continue
        pdf.add_page()
        pdf.section(f"Phase {phase}: {PHASE_TITLES[phase]}")
        _add_phase_stats(pdf, df)
        pdf.ln(3)
        _add_figure(pdf, charts.training_curve_figure(df, phase))
        _add_figure(pdf, charts.steps_figure(df, phase))

    pdf.add_page()
    pdf.section("Full Solver Evaluation")
    if eval_df is None or eval_df.empty:
        pdf.stat_row(["No evaluation results."], width=0)
    else:
        pdf.stat_row([f"Episodes: {int(eval_df['episodes'].sum())}",
                      f"Total success: {overall_success(eval_df):.1%}"], width=95)
        pdf.ln(2)
        _add_figure(pdf, charts.eval_figure(eval_df))
        _add_eval_table(pdf, eval_df)

    return pdf.output(dest='S').encode('latin-1')


def _add_title_page(pdf: ReportPDF, run_data: Dict[str, Any]) -> None:
    pdf.add_page()
    pdf.set_y(110)
    pdf.use_font('B', 28)
    pdf.cell(0, 20, run_data.get('name') or 'QUBE run', ln=True, align='C')
    pdf.use_font('', 16)
    pdf.cell(0, 10, "Four-phase DDQN cube solver", ln=True, align='C')
    pdf.ln(10)
    pdf.use_font('', 12)
    pdf.cell(0, 10, f"Date: {date.today().strftime('%B %d, %Y')}", ln=True, align='C')
    if run_data.get('author'):
        pdf.ln(5)
        pdf.cell(0, 10, f"Prepared by: {run_data['author']}", ln=True, align='C')


def _add_figure(pdf: ReportPDF, fig: Figure) -> None:
    """Embed a matplotlib figure via a temporary PNG."""
    try:
        with tempfile.NamedTemporaryFile(suffix=".png", delete=False) as tmp_file:
            fig.savefig(tmp_file.name, dpi=120)
            tmp_path = tmp_file.name
        pdf.image(tmp_path, x=15, w=180)
        os.unlink(tmp_path)
    except Exception as e:
        logger.warning(f"Could not embed figure: {e}")
        pdf.stat_row(["[Figure unavailable]"], width=0)
    finally:
        charts.close(fig)


def _add_phase_stats(pdf: ReportPDF, df: pd.DataFrame) -> None:
    summary = training_summary(df)
    pdf.stat_row([
        f"Episodes: {summary['episodes']}",
        f"Success: {summary['success_rate']:.1%}",
        f"Final moving success: {summary['final_moving_success']:.1%}",
    ])
    pdf.stat_row([
        f"Mean steps (solved): {summary['mean_steps_solved']:.1f}",
        f"Final epsilon: {summary['final_epsilon']:.4f}",
    ])


def _add_eval_table(pdf: ReportPDF, eval_df: pd.DataFrame) -> None:
    """Per-length success table, black header row."""
    pdf.set_fill_color(0, 0, 0)
    pdf.set_text_color(255, 255, 255)
    pdf.use_font('B', 9)
    for header, width in EVAL_TABLE_LAYOUT:
        pdf.cell(width, 8, header, 1, 0, 'C', fill=True)
    pdf.ln()

    pdf.set_text_color(0, 0, 0)
    pdf.use_font('', 8)
    for _, row in eval_df.iterrows():
        values = [
            str(int(row['scramble_len'])), str(int(row['episodes'])),
            *(f"{row[f'phase{p}_success']:.1%}" for p in PHASES),
            f"{row['total_success']:.1%}", f"{row['mean_moves']:.1f}",
        ]
        for value, (_, width) in zip(values, EVAL_TABLE_LAYOUT):
            pdf.cell(width, 7, value, 1, 0, 'C')
        pdf.ln()
