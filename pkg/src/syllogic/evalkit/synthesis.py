"""Synthetic relevance datasets: inject topically related distractor premises.

A base sample receives 3 to 5 irrelevant premises drawn from pool samples
that share at least one content token with it (a lowercase token-overlap
heuristic stands in for POS tagging). Plausible base samples draw only from
plausible pool samples. Premises are merged, deduplicated and shuffled, and
gold relevance is rewritten to the post-shuffle indices of the original
premises (empty for invalid samples).
"""
from __future__ import annotations

import re
from dataclasses import replace
from typing import Sequence

import numpy as np

from ..pipeline import Syllogism
from .metrics import MissingLabelsError

STOPWORDS = frozenset("""
a about all an and any are as at be been both but by can cannot could do
does each either every few for from had has have if in into is it its more
most no nor not of on one only or other our out own same she he some such
than that the their them then there these they this those through to too
under until up very was were what which while who whom why will with would
every single thing things type kind called also true case
""".split())

_TOKEN_RE = re.compile(r"[a-z][a-z0-9]*")


class InsufficientPoolError(Exception):
    pass


def content_tokens(sample: Syllogism) -> set[str]:
    """Tokens appearing in at least two propositions, minus stop words.

    A syllogism's terms recur across propositions, so recurring non-stop
    tokens approximate the nouns a POS tagger would find.
    """
    propositions = [*sample.premises, sample.conclusion]
    seen_in: dict[str, int] = {}
    for text in propositions:
        for token in set(_TOKEN_RE.findall(text.lower())):
            if token in STOPWORDS or len(token) < 3:
                continue
            seen_in[token] = seen_in.get(token, 0) + 1
    return {token for token, count in seen_in.items() if count >= 2}


def synthesize_subtask2(base: Sequence[Syllogism], pool: Sequence[Syllogism],
                        k_range: tuple[int, int] = (3, 5),
                        seed: int = 0) -> list[Syllogism]:
    """Relevance dataset built by distractor injection. Deterministic."""
    k_min, k_max = k_range
    if not 1 <= k_min <= k_max:
        raise ValueError(f"bad k_range {k_range}")
    base_ids = {s.id for s in base}
    overlap = base_ids & {s.id for s in pool}
    if overlap:
        raise ValueError(f"pool overlaps base on ids: {sorted(overlap)[:3]}")

    pool_tokens = [(s, content_tokens(s)) for s in pool]
    rng = np.random.default_rng(seed)
    out: list[Syllogism] = []
    for sample in base:
        if sample.label_valid is None:
            raise MissingLabelsError(f"sample {sample.id} has no validity label")
        tokens = content_tokens(sample)
        related = [
            s for s, pool_toks in pool_tokens
            if tokens & pool_toks
            and not (sample.label_plausible is True and s.label_plausible is not True)
        ]
        candidates: list[str] = []
        taken = set(sample.premises) | {sample.conclusion}
        for related_sample in related:
            for premise in related_sample.premises:
                if premise not in taken:
                    candidates.append(premise)
                    taken.add(premise)
        k = int(rng.integers(k_min, k_max + 1))
        if len(candidates) < k:
            raise InsufficientPoolError(
                f"sample {sample.id}: only {len(candidates)} related distractor "
                f"premises available, need {k}")
        chosen = [candidates[i] for i in
                  rng.choice(len(candidates), size=k, replace=False)]
        merged = list(sample.premises) + chosen
        order = rng.permutation(len(merged))
        shuffled = [merged[i] for i in order]
        original_positions = {
            int(new) for new, old in enumerate(order) if old < len(sample.premises)
        }
        gold = tuple(sorted(original_positions)) if sample.label_valid else ()
        out.append(replace(sample, premises=tuple(shuffled), gold_relevant=gold))
    return out
