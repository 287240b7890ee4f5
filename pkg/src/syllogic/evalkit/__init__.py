"""Metrics, bootstrap intervals, unbiased-model analysis, and dataset tools."""

from .bootstrap import bootstrap_ci
from .datasets import (
    DatasetFormatError,
    emit_report,
    load_dataset,
    load_predictions,
    save_dataset,
    save_predictions,
)
from .evaluate import DEFAULT_BOOTSTRAP, evaluate_predictions
from .metrics import (
    GROUP_KEYS,
    GroupAccuracies,
    IdMismatchError,
    MetricError,
    MetricReport,
    MissingLabelsError,
    accuracy,
    combined_score,
    content_effect,
    group_accuracies,
    group_counts,
    premise_f1,
)
from .simulation import (
    UnbiasedModelSpec,
    ce_significance_threshold,
    cs_single_flip,
    expected_ce_closed_form,
    sensitivity_curve,
    simulate_unbiased_ce,
)
from .synthesis import InsufficientPoolError, content_tokens, synthesize_subtask2

__all__ = [
    "DEFAULT_BOOTSTRAP",
    "DatasetFormatError",
    "GROUP_KEYS",
    "GroupAccuracies",
    "IdMismatchError",
    "InsufficientPoolError",
    "MetricError",
    "MetricReport",
    "MissingLabelsError",
    "UnbiasedModelSpec",
    "accuracy",
    "bootstrap_ci",
    "ce_significance_threshold",
    "combined_score",
    "content_effect",
    "content_tokens",
    "cs_single_flip",
    "emit_report",
    "evaluate_predictions",
    "expected_ce_closed_form",
    "group_accuracies",
    "group_counts",
    "load_dataset",
    "load_predictions",
    "premise_f1",
    "save_dataset",
    "save_predictions",
    "sensitivity_curve",
    "simulate_unbiased_ce",
    "synthesize_subtask2",
]
