"""Top-X evaluation and the synthetic benchmark corpus."""

from kakamatch.evaluation.topx import LabelRow, LabelTable, evaluate_many, evaluate_topx, render_table
from kakamatch.evaluation.synthetic import generate_synthetic_benchmark

__all__ = [
    'LabelRow',
    'LabelTable',
    'evaluate_many',
    'evaluate_topx',
    'render_table',
    'generate_synthetic_benchmark',
]
