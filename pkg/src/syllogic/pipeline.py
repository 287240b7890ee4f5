"""End-to-end orchestration: translate, parse, augment, prove, retrieve.

Samples are processed concurrently up to a worker limit; results are
reassembled in input order, and a failing sample becomes a prediction with
``valid=false`` and a failure flag instead of aborting the run.
"""
from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from .aristotle import augment_existential_import
from .fol.ast import FolError, Sentence
from .fol.latex import parse_latex_formula, render_latex
from .gateway.client import GatewayError
from .gateway.extract import ExtractionError, IndexOutOfRangeError
from .gateway.workflows import (
    ParseExhaustedError,
    RetryPolicy,
    end_to_end_classify,
    llm_prove,
    llm_retrieve_relevant,
    parse_syllogism_direct_prover9,
    parse_syllogism_multistep,
    parse_syllogism_singlestep,
    translate_syllogism,
)
from .prover.enumeration import decide_by_domain_enumeration
from .prover.external import prove_external
from .prover.normal import UnsupportedError
from .prover.typespace import (
    ProverProblem,
    ProverVerdict,
    VerdictStatus,
    decide_entailment,
)


class Strategy(Enum):
    MULTI_STEP = "multistep"
    SINGLE_STEP = "singlestep"
    DIRECT_PROVER9 = "direct-prover9"
    END_TO_END = "end-to-end"
    LLM_PROVER = "llm-prover"
    LLM_RETRIEVAL = "llm-retrieval"


class EngineChoice(Enum):
    TYPE_SPACE = "typespace"
    DOMAIN_ENUMERATION = "enumeration"
    EXTERNAL = "external"


@dataclass(frozen=True)
class Syllogism:
    id: str
    premises: tuple[str, ...]
    conclusion: str
    label_valid: bool | None = None
    label_plausible: bool | None = None
    gold_relevant: tuple[int, ...] | None = None
    language: str = "en"

    def __post_init__(self):
        if not self.id:
            raise ValueError("id must be nonempty")
        if not self.premises or any(not p.strip() for p in self.premises):
            raise ValueError(f"sample {self.id}: premises must be nonempty")
        if not self.conclusion.strip():
            raise ValueError(f"sample {self.id}: conclusion must be nonempty")
        if self.gold_relevant is not None:
            for i in self.gold_relevant:
                if not 0 <= i < len(self.premises):
                    raise ValueError(
                        f"sample {self.id}: relevant index {i} out of range")


@dataclass(frozen=True)
class PipelineConfig:
    strategy: Strategy = Strategy.MULTI_STEP
    translate_first: bool = False
    augment_import: bool = True
    engine: EngineChoice = EngineChoice.TYPE_SPACE
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    worker_limit: int = 4
    max_domain: int = 64
    prover9_path: str | None = None
    prover9_timeout: float = 10.0


@dataclass(frozen=True)
class Prediction:
    id: str
    valid: bool
    relevant: tuple[int, ...]
    diagnostics: dict

    def __post_init__(self):
        indices = list(self.relevant)
        if indices != sorted(set(indices)):
            raise ValueError("relevant indices must be sorted and unique")


class _CountingGateway:
    """Per-sample wrapper recording how many completions were attempted."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0

    def complete(self, template_name, prompt, *, temperature=0.0, attempt=1):
        self.calls += 1
        return self.inner.complete(template_name, prompt,
                                   temperature=temperature, attempt=attempt)


def format_syllogism(premises: Sequence[str], conclusion: str) -> str:
    lines = [f"P{i + 1}: {p}" for i, p in enumerate(premises)]
    lines.append(f"C: {conclusion}")
    return "\n".join(lines)


class TranslationFormatError(Exception):
    pass


_LINE_PREFIXES = ("p", "premise", "c", "conclusion")


def split_translated_syllogism(text: str, n_premises: int) -> tuple[list[str], str]:
    """Split a translated syllogism back into premises and conclusion.

    Expects one proposition per nonempty line, optionally labeled the way
    format_syllogism labels them.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    cleaned: list[str] = []
    for line in lines:
        head, sep, rest = line.partition(":")
        if sep and head.strip().lower().rstrip("0123456789 ") in _LINE_PREFIXES:
            cleaned.append(rest.strip())
        else:
            cleaned.append(line)
    if len(cleaned) != n_premises + 1:
        raise TranslationFormatError(
            f"expected {n_premises + 1} propositions, got {len(cleaned)}")
    return cleaned[:-1], cleaned[-1]


def _decide(premises: Sequence[Sentence], conclusion: Sentence,
            cfg: PipelineConfig) -> ProverVerdict:
    working = list(premises)
    if cfg.augment_import:
        working = augment_existential_import(working)
    problem = ProverProblem(tuple(working), conclusion)
    if cfg.engine is EngineChoice.TYPE_SPACE:
        return decide_entailment(problem)
    if cfg.engine is EngineChoice.DOMAIN_ENUMERATION:
        return decide_by_domain_enumeration(problem, cfg.max_domain)
    if cfg.prover9_path is None:
        raise ValueError("external engine selected but no prover9 path configured")
    return prove_external(problem, cfg.prover9_path, cfg.prover9_timeout)


def retrieve_relevant_premises(premises: Sequence[Sentence], conclusion: Sentence,
                               cfg: PipelineConfig) -> list[int]:
    """Greedy relevance retrieval with permanent removal.

    If the full premise set does not entail the conclusion the result is
    empty. Otherwise premises are dropped in index order whenever the proof
    survives without them; import augmentation is recomputed from the
    current working set at every check.
    """
    def entails(indices: list[int]) -> bool:
        verdict = _decide([premises[i] for i in indices], conclusion, cfg)
        return verdict.status is VerdictStatus.ENTAILED

    all_indices = list(range(len(premises)))
    if not entails(all_indices):
        return []
    working = list(all_indices)
    for i in all_indices:
        trial = [j for j in working if j != i]
        if entails(trial):
            working = trial
    return sorted(working)


def classify_validity(sample: Syllogism, cfg: PipelineConfig, gateway=None,
                      want_relevance: bool = False) -> Prediction:
    """Run one sample through the configured strategy.

    Raises parse/transport/fragment errors; run_subtask converts them into
    failure predictions so a batch keeps going.
    """
    if not sample.conclusion.strip():  # guarded again before any model call
        raise ValueError(f"sample {sample.id}: empty conclusion")
    if gateway is None:
        raise ValueError(
            f"strategy {cfg.strategy.value} needs a gateway (HTTP client or stub)")
    counting = _CountingGateway(gateway)
    propositions = [*sample.premises, sample.conclusion]
    diagnostics: dict = {
        "fol_premises": [],
        "fol_conclusion": "",
        "engine": cfg.engine.value,
        "attempts": 0,
        "failed": False,
        "error": None,
    }

    if cfg.strategy is Strategy.END_TO_END:
        valid, relevant = end_to_end_classify(
            counting, format_syllogism(sample.premises, sample.conclusion),
            want_relevance)
        diagnostics["engine"] = "llm"
        diagnostics["attempts"] = counting.calls
        selected: tuple[int, ...] = ()
        if want_relevance and relevant is not None:
            for index in relevant:
                if not 0 <= index < len(sample.premises):
                    raise IndexOutOfRangeError(index, len(sample.premises))
            selected = tuple(relevant)
        return Prediction(sample.id, valid, selected, diagnostics)

    if cfg.strategy in (Strategy.MULTI_STEP, Strategy.LLM_RETRIEVAL,
                        Strategy.LLM_PROVER):
        mapping = parse_syllogism_multistep(counting, propositions, cfg.retry)
    elif cfg.strategy is Strategy.SINGLE_STEP:
        mapping = parse_syllogism_singlestep(
            counting, format_syllogism(sample.premises, sample.conclusion),
            len(sample.premises), cfg.retry)
    elif cfg.strategy is Strategy.DIRECT_PROVER9:
        mapping = parse_syllogism_direct_prover9(counting, propositions, cfg.retry)
    else:
        raise ValueError(f"unhandled strategy {cfg.strategy}")

    if cfg.strategy is Strategy.SINGLE_STEP:
        sentences = mapping.sentences()
        premise_sentences = sentences[:-1]
        conclusion_sentence = sentences[-1]
    else:
        premise_sentences = [mapping.sentence_for(p) for p in sample.premises]
        conclusion_sentence = mapping.sentence_for(sample.conclusion)

    diagnostics["fol_premises"] = [render_latex(s) for s in premise_sentences]
    diagnostics["fol_conclusion"] = render_latex(conclusion_sentence)
    diagnostics["attempts"] = counting.calls

    if cfg.strategy is Strategy.LLM_PROVER:
        valid = llm_prove(counting, diagnostics["fol_premises"],
                          diagnostics["fol_conclusion"])
        diagnostics["engine"] = "llm"
        diagnostics["attempts"] = counting.calls
    else:
        verdict = _decide(premise_sentences, conclusion_sentence, cfg)
        valid = verdict.status is VerdictStatus.ENTAILED
        if verdict.countermodel is not None:
            diagnostics["countermodel"] = [
                sorted(t) for t in verdict.countermodel.domain()]
    return Prediction(sample.id, valid, (), diagnostics)


_SAMPLE_ERRORS = (FolError, GatewayError, ExtractionError, ParseExhaustedError,
                  UnsupportedError, TranslationFormatError, ValueError)


def _process_sample(sample: Syllogism, subtask: int, cfg: PipelineConfig,
                    gateway) -> Prediction:
    try:
        working = sample
        if subtask in (3, 4) and cfg.translate_first and sample.language != "en":
            outcome = translate_syllogism(
                gateway, format_syllogism(sample.premises, sample.conclusion))
            premises, conclusion = split_translated_syllogism(
                outcome.translation, len(sample.premises))
            working = replace(sample, premises=tuple(premises),
                              conclusion=conclusion, language="en")

        want_relevance = subtask in (2, 4)
        prediction = classify_validity(
            working, cfg, gateway,
            want_relevance=want_relevance and cfg.strategy is Strategy.END_TO_END)

        if want_relevance and cfg.strategy is not Strategy.END_TO_END:
            relevant: tuple[int, ...] = ()
            if cfg.strategy is Strategy.LLM_RETRIEVAL:
                if prediction.valid:
                    relevant = tuple(llm_retrieve_relevant(
                        gateway, prediction.diagnostics["fol_premises"],
                        prediction.diagnostics["fol_conclusion"]))
            else:
                sentences = [parse_latex_formula(f)
                             for f in prediction.diagnostics["fol_premises"]]
                conclusion = parse_latex_formula(
                    prediction.diagnostics["fol_conclusion"])
                relevant = tuple(retrieve_relevant_premises(
                    sentences, conclusion, cfg))
            prediction = replace(prediction, relevant=relevant)
        return prediction
    except _SAMPLE_ERRORS as exc:
        return Prediction(sample.id, False, (), {
            "fol_premises": [],
            "fol_conclusion": "",
            "engine": cfg.engine.value,
            "attempts": 0,
            "failed": True,
            "error": f"{type(exc).__name__}: {exc}",
        })


def run_subtask(dataset: Sequence[Syllogism], subtask: int, cfg: PipelineConfig,
                gateway=None) -> list[Prediction]:
    """Predictions for a dataset, in input order.

    Subtasks 3 and 4 translate non-English samples first (when configured);
    subtasks 2 and 4 add premise relevance. Per-sample failures yield
    ``valid=false`` predictions flagged in diagnostics.
    """
    if subtask not in (1, 2, 3, 4):
        raise ValueError(f"subtask must be 1..4, got {subtask}")
    if cfg.engine is EngineChoice.EXTERNAL and cfg.prover9_path is None:
        raise ValueError("external engine selected but no prover9 path configured")
    if cfg.worker_limit <= 1 or len(dataset) <= 1:
        return [_process_sample(s, subtask, cfg, gateway) for s in dataset]
    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.worker_limit) as pool:
        return list(pool.map(
            lambda s: _process_sample(s, subtask, cfg, gateway), dataset))
