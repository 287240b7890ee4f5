"""Prompt workflows: formalization, translation, and the ablation modes.

Propositions are formalized one by one; each call after the first carries
the mapping of already-formalized propositions so the model keeps predicate
names consistent. Unparseable responses are retried, the first attempt at
temperature 0 and later attempts at the policy's retry temperature.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..fol.ast import FolError, PredicateMapping, Sentence
from ..fol.latex import parse_latex_formula, render_latex
from ..fol.prover9 import parse_prover9_formula, render_prover9
from .client import GatewayError
from .extract import (
    ExtractionError,
    IndexOutOfRangeError,
    NoJsonFoundError,
    NotABooleanError,
    SchemaMismatchError,
    extract_boxed,
    extract_json_object,
    parse_json_bool,
)

# failures that consume a retry attempt: transport plus extraction/parse
RETRYABLE_ERRORS = (GatewayError, FolError, ExtractionError)
from .templates import PromptTemplate, load_template


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    retry_temperature: float = 0.6

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")

    def temperature_for(self, attempt: int) -> float:
        return 0.0 if attempt == 1 else self.retry_temperature


@dataclass(frozen=True)
class TranslationOutcome:
    translation: str
    self_eval_feedback: str
    self_eval_correct: bool
    corrected: bool

    def __post_init__(self):
        if self.corrected and self.self_eval_correct:
            raise ValueError("corrected implies a failed first-pass evaluation")


class ParseExhaustedError(Exception):
    def __init__(self, proposition_index: int | None, attempts: int,
                 last_error: Exception | None = None):
        self.proposition_index = proposition_index
        self.attempts = attempts
        self.last_error = last_error
        where = ("" if proposition_index is None
                 else f" for proposition {proposition_index}")
        super().__init__(
            f"no parseable response{where} after {attempts} attempts"
            + (f": {last_error}" if last_error else ""))


def format_previous_propositions(pairs: Sequence[tuple[str, str]]) -> str:
    return "\n".join(f"{text} -> {formula}" for text, formula in pairs)


def _complete_with_retry(gateway, template: PromptTemplate, slots: dict,
                         policy: RetryPolicy, interpret: Callable[[str], Sentence],
                         index: int | None) -> tuple[Sentence, int]:
    prompt = template.render(**slots)
    last_error: Exception | None = None
    for attempt in range(1, policy.max_attempts + 1):
        try:
            response = gateway.complete(
                template.name, prompt,
                temperature=policy.temperature_for(attempt), attempt=attempt)
            return interpret(response), attempt
        except RETRYABLE_ERRORS as exc:
            last_error = exc
    raise ParseExhaustedError(index, policy.max_attempts, last_error)


def _multistep(gateway, propositions: Sequence[str], policy: RetryPolicy,
               initial_name: str, default_name: str,
               parse: Callable[[str], Sentence],
               render: Callable[[Sentence], str]) -> PredicateMapping:
    if not propositions:
        raise ValueError("propositions must be nonempty")
    initial = load_template(initial_name)
    default = load_template(default_name)
    entries: list[tuple[str, Sentence]] = []
    rendered: list[tuple[str, str]] = []
    for i, text in enumerate(propositions):
        already = next((s for t, s in entries if t == text), None)
        if already is not None:
            continue  # repeated proposition: reuse the existing formalization

        def interpret(response: str) -> Sentence:
            return parse(extract_boxed(response))

        if i == 0:
            slots = {"proposition": text}
            template = initial
        else:
            slots = {
                "previous_propositions": format_previous_propositions(rendered),
                "proposition": text,
            }
            template = default
        sentence, _ = _complete_with_retry(gateway, template, slots, policy,
                                           interpret, i)
        entries.append((text, sentence))
        rendered.append((text, render(sentence)))
    return PredicateMapping(tuple(entries))


def parse_syllogism_multistep(gateway, propositions: Sequence[str],
                              policy: RetryPolicy = RetryPolicy()) -> PredicateMapping:
    """Formalize propositions one per call through the LaTeX templates."""
    return _multistep(gateway, propositions, policy,
                      "parser_initial", "parser_default",
                      parse_latex_formula, render_latex)


def parse_syllogism_direct_prover9(gateway, propositions: Sequence[str],
                                   policy: RetryPolicy = RetryPolicy(),
                                   ) -> PredicateMapping:
    """Ablation: formalize straight into Prover9 syntax (with cleanup)."""
    return _multistep(gateway, propositions, policy,
                      "direct_prover9_initial", "direct_prover9_default",
                      parse_prover9_formula,
                      lambda s: render_prover9(s).rstrip("."))


def parse_syllogism_singlestep(gateway, syllogism_text: str, n_premises: int,
                               policy: RetryPolicy = RetryPolicy(),
                               ) -> PredicateMapping:
    """Formalize the whole syllogism in one JSON-producing call."""
    template = load_template("single_step")
    prompt = template.render(num_premises=n_premises, syllogism=syllogism_text)
    last_error: Exception | None = None
    for attempt in range(1, policy.max_attempts + 1):
        try:
            response = gateway.complete(
                "single_step", prompt,
                temperature=policy.temperature_for(attempt), attempt=attempt)
            return _interpret_singlestep(response, n_premises)
        except RETRYABLE_ERRORS as exc:
            last_error = exc
    raise ParseExhaustedError(None, policy.max_attempts, last_error)


def _interpret_singlestep(response: str, n_premises: int) -> PredicateMapping:
    payload = extract_json_object(response)
    if not isinstance(payload, list):
        raise SchemaMismatchError("a JSON array of proposition/fol_formula pairs")
    if len(payload) != n_premises + 1:
        raise SchemaMismatchError(
            f"expected {n_premises + 1} entries, got {len(payload)}")
    entries: list[tuple[str, Sentence]] = []
    for item in payload:
        if not isinstance(item, dict) or not {"proposition", "fol_formula"} <= item.keys():
            raise SchemaMismatchError(
                "entries with 'proposition' and 'fol_formula' fields")
        entries.append((str(item["proposition"]),
                        parse_latex_formula(str(item["fol_formula"]))))
    try:
        return PredicateMapping(tuple(entries))
    except ValueError as exc:
        raise SchemaMismatchError(str(exc)) from exc


def translate_syllogism(gateway, syllogism_text: str) -> TranslationOutcome:
    """Translate, self-evaluate, and run at most one correction round."""
    translation = gateway.complete(
        "translation",
        load_template("translation").render(syllogism=syllogism_text)).strip()
    eval_prompt = load_template("translation_eval").render(
        formatted_original=syllogism_text, translation=translation)
    verdict = extract_json_object(gateway.complete("translation_eval", eval_prompt))
    if not isinstance(verdict, dict) or not {"feedback", "correct"} <= verdict.keys():
        raise SchemaMismatchError("an object with 'feedback' and 'correct'")
    feedback = str(verdict["feedback"])
    correct = parse_json_bool(verdict["correct"])
    if correct:
        return TranslationOutcome(translation, feedback, True, False)
    corrected = gateway.complete(
        "translation_feedback",
        load_template("translation_feedback").render(
            syllogism=syllogism_text, feedback=feedback)).strip()
    return TranslationOutcome(corrected, feedback, False, True)


def end_to_end_classify(gateway, syllogism_text: str,
                        want_relevance: bool) -> tuple[bool, list[int] | None]:
    """Ablation: let the model judge validity (and premise relevance) directly."""
    name = "end_to_end_retrieval" if want_relevance else "end_to_end"
    prompt = load_template(name).render(syllogism=syllogism_text)
    payload = extract_json_object(gateway.complete(name, prompt))
    if not isinstance(payload, dict) or "valid" not in payload or "reasoning" not in payload:
        raise SchemaMismatchError("an object with 'reasoning' and 'valid'")
    valid = parse_json_bool(payload["valid"])
    relevant: list[int] | None = None
    if want_relevance:
        raw = payload.get("relevant_premises", []) if valid else []
        if not isinstance(raw, list) or not all(isinstance(i, int) for i in raw):
            raise SchemaMismatchError("'relevant_premises' as a list of integers")
        relevant = sorted(set(raw))
    return valid, relevant


def llm_prove(gateway, premises_fol: Sequence[str], conclusion_fol: str) -> bool:
    """Ablation: boxed true/false verdict from the model on FOL formulas."""
    prompt = load_template("llm_prover").render(
        premises="\n".join(premises_fol), conclusion=conclusion_fol)
    token = extract_boxed(gateway.complete("llm_prover", prompt)).strip().lower()
    if token not in ("true", "false"):
        raise NotABooleanError(token)
    return token == "true"


def llm_retrieve_relevant(gateway, premises: Sequence[str],
                          conclusion: str) -> list[int]:
    """Ablation: model-selected relevant premise indices, range-checked."""
    prompt = load_template("llm_retrieval").render(
        premises="\n".join(f"{i}: {p}" for i, p in enumerate(premises)),
        conclusion=conclusion)
    payload = extract_json_object(gateway.complete("llm_retrieval", prompt))
    if not isinstance(payload, list) or not all(isinstance(i, int) for i in payload):
        raise SchemaMismatchError("a JSON array of 0-based integer indices")
    for index in payload:
        if not 0 <= index < len(premises):
            raise IndexOutOfRangeError(index, len(premises))
    return sorted(set(payload))
