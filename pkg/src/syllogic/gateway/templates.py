"""Prompt templates shipped as text assets with ``{slot}`` placeholders.

Rendering substitutes declared slots only, so literal braces in the bodies
(JSON examples, ``\\boxed{true}``) pass through untouched.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

TEMPLATE_SLOTS: dict[str, frozenset[str]] = {
    "parser_default": frozenset({"previous_propositions", "proposition"}),
    "parser_initial": frozenset({"proposition"}),
    "translation": frozenset({"syllogism"}),
    "translation_eval": frozenset({"formatted_original", "translation"}),
    "translation_feedback": frozenset({"syllogism", "feedback"}),
    "end_to_end": frozenset({"syllogism"}),
    "end_to_end_retrieval": frozenset({"syllogism"}),
    "direct_prover9_default": frozenset({"previous_propositions", "proposition"}),
    "direct_prover9_initial": frozenset({"proposition"}),
    "single_step": frozenset({"num_premises", "syllogism"}),
    "llm_prover": frozenset({"premises", "conclusion"}),
    "llm_retrieval": frozenset({"premises", "conclusion"}),
}

TEMPLATE_NAMES = tuple(sorted(TEMPLATE_SLOTS))


class TemplateError(Exception):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str
    required_slots: frozenset[str]

    def __post_init__(self):
        for slot in self.required_slots:
            if "{%s}" % slot not in self.body:
                raise TemplateError(
                    f"template '{self.name}' is missing slot {{{slot}}}")

    def render(self, **slots) -> str:
        missing = self.required_slots - slots.keys()
        if missing:
            raise TemplateError(
                f"template '{self.name}' missing values for {sorted(missing)}")
        unknown = slots.keys() - self.required_slots
        if unknown:
            raise TemplateError(
                f"template '{self.name}' got unknown slots {sorted(unknown)}")
        text = self.body
        for slot, value in slots.items():
            text = text.replace("{%s}" % slot, str(value))
        for slot in self.required_slots:
            if re.search(r"\{%s\}" % re.escape(slot), text):
                raise TemplateError(
                    f"template '{self.name}' still contains slot {{{slot}}}")
        return text


def load_template(name: str) -> PromptTemplate:
    if name not in TEMPLATE_SLOTS:
        raise TemplateError(f"unknown template '{name}'")
    body = (resources.files(__package__) / "prompts" / f"{name}.txt").read_text(
        encoding="utf-8")
    return PromptTemplate(name, body, TEMPLATE_SLOTS[name])


def builtin_templates() -> dict[str, PromptTemplate]:
    return {name: load_template(name) for name in TEMPLATE_NAMES}
