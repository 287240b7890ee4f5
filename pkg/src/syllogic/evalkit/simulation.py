"""Unbiased-model simulation and the closed-form expected content effect.

An unbiased model classifies each of the four validity/plausibility groups
with the same accuracy a, yet its MEASURED content effect is nonzero: the
per-group accuracies are scaled binomials, and the mean absolute difference
of two of them follows the folded-normal mean sigma*sqrt(2/pi), giving
E[CE | a] ~= 200*sqrt(a(1-a)/(pi*N)) for N samples per group. The
simulation draws the four groups directly and measures accuracy and CE.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UnbiasedModelSpec:
    accuracy_a: float
    n_per_group: int
    trials: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.accuracy_a <= 1.0:
            raise ValueError("accuracy_a must be in [0, 1]")
        if self.n_per_group < 1:
            raise ValueError("n_per_group must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


def expected_ce_closed_form(a: float, n: int) -> float:
    """Approximate expected measured CE of an unbiased model, in percent."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("a must be in [0, 1]")
    if n < 1:
        raise ValueError("n must be at least 1")
    return 200.0 * math.sqrt(a * (1.0 - a) / (math.pi * n))


def _ce_from_cells(cells: np.ndarray) -> np.ndarray:
    """CE per row of a (trials, 4) array of group accuracies."""
    a_vp, a_vnp, a_nvp, a_nvnp = cells.T
    c_intra = (np.abs(a_vp - a_vnp) + np.abs(a_nvp - a_nvnp)) / 2.0
    c_inter = (np.abs(a_vp - a_nvp) + np.abs(a_vnp - a_nvnp)) / 2.0
    return (c_intra + c_inter) / 2.0


def simulate_unbiased_ce(spec: UnbiasedModelSpec,
                         rng: np.random.Generator | None = None,
                         ) -> list[tuple[float, float]]:
    """(measured accuracy, measured CE) per trial, reproducible under seed."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    correct = rng.binomial(spec.n_per_group, spec.accuracy_a,
                           size=(spec.trials, 4))
    cells = 100.0 * correct / spec.n_per_group
    ce = _ce_from_cells(cells)
    acc = 100.0 * correct.sum(axis=1) / (4 * spec.n_per_group)
    return list(zip(acc.tolist(), ce.tolist()))


def ce_significance_threshold(n_per_group: int, accuracy_grid: list[float],
                              trials: int, seed: int,
                              quantile: float = 0.95) -> list[tuple[float, float]]:
    """Empirical CE quantile of the unbiased model, per grid accuracy.

    Each grid point gets its own generator spawned from the master seed, so
    points are independent of grid order and may be computed in parallel.
    """
    if not 0.0 <= quantile <= 1.0:
        raise ValueError("quantile must be in [0, 1]")
    children = np.random.SeedSequence(seed).spawn(len(accuracy_grid))
    table: list[tuple[float, float]] = []
    for a, child in zip(accuracy_grid, children):
        spec = UnbiasedModelSpec(a, n_per_group, trials, seed)
        results = simulate_unbiased_ce(spec, rng=np.random.default_rng(child))
        ces = np.array([ce for _, ce in results])
        table.append((a, float(np.quantile(ces, quantile))))
    return table


def cs_single_flip(n_total: int) -> tuple[float, float, float]:
    """Combined score of a perfect model before and after one flipped label.

    The model is perfect on all four equal-sized groups; one prediction in
    one group is flipped and accuracy, CE and CS are recomputed exactly.
    Returns (cs_before, cs_after, drop).
    """
    if n_total % 4 != 0:
        raise ValueError("n_total must be divisible by 4")
    per_group = n_total // 4
    cs_before = 100.0  # accuracy 100, CE 0
    flipped_cell = 100.0 * (per_group - 1) / per_group
    cells = np.array([[flipped_cell, 100.0, 100.0, 100.0]])
    ce_after = float(_ce_from_cells(cells)[0])
    acc_after = 100.0 * (n_total - 1) / n_total
    cs_after = acc_after / (1.0 + math.log(1.0 + ce_after))
    return cs_before, cs_after, cs_before - cs_after


def sensitivity_curve(accuracies: list[float], ce_max: float = 30.0,
                      ce_step: float = 0.25) -> list[tuple[float, float, float]]:
    """(accuracy, ce, cs) rows showing how the discount bites as CE grows."""
    rows: list[tuple[float, float, float]] = []
    steps = int(round(ce_max / ce_step))
    for accuracy in accuracies:
        for k in range(steps + 1):
            ce = k * ce_step
            cs = accuracy / (1.0 + math.log(1.0 + ce))
            rows.append((accuracy, ce, cs))
    return rows
