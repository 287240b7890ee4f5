"""Percentile bootstrap over sample-level resamples."""
from __future__ import annotations

from dataclasses import replace
from typing import Callable, Sequence

import numpy as np

from ..pipeline import Prediction, Syllogism

Metric = Callable[[Sequence[Prediction], Sequence[Syllogism]], float]


def bootstrap_ci(metric: Metric, preds: Sequence[Prediction],
                 gold: Sequence[Syllogism], b: int = 10000,
                 seed: int = 0) -> tuple[float, float]:
    """95% percentile interval (2.5/97.5) over b resamples with replacement.

    Resampling is at the sample level and deterministic under the seed.
    """
    if b < 100:
        raise ValueError(f"need at least 100 bootstrap resamples, got {b}")
    by_id = {p.id: p for p in preds}
    pairs = [(by_id[g.id], g) for g in gold]
    n = len(pairs)
    if n == 0:
        raise ValueError("cannot bootstrap an empty dataset")
    rng = np.random.default_rng(seed)
    values = np.empty(b)
    for trial, row in enumerate(rng.integers(0, n, size=(b, n))):
        resampled_preds = []
        resampled_gold = []
        for rank, index in enumerate(row):
            pred, sample = pairs[index]
            # re-key so duplicated draws stay distinct samples
            fresh = f"b{rank}"
            resampled_preds.append(replace(pred, id=fresh))
            resampled_gold.append(replace(sample, id=fresh))
        values[trial] = metric(resampled_preds, resampled_gold)
    lo, hi = np.percentile(values, [2.5, 97.5])
    return float(lo), float(hi)
