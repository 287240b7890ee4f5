"""Shared builders: categorical text datasets and gold-FOL stub gateways."""
from __future__ import annotations

import pytest

from syllogic.aristotle import FormKind, categorical_sentence
from syllogic.fol.latex import parse_latex_formula, render_latex
from syllogic.gateway.client import StubGateway
from syllogic.gateway.templates import load_template
from syllogic.pipeline import Syllogism

TEXT_PATTERNS = {
    FormKind.A: "Every {s} is a {p}.",
    FormKind.E: "No {s} is a {p}.",
    FormKind.I: "Some {s} is a {p}.",
    FormKind.O: "Some {s} is not a {p}.",
}


def categorical_text(kind: FormKind, subject: str, predicate: str) -> str:
    return TEXT_PATTERNS[kind].format(s=subject, p=predicate)


def mood_sample(sample_id: str, figure: int, mood: str,
                terms: tuple[str, str, str], label_valid: bool,
                label_plausible: bool | None = None,
                language: str = "en") -> tuple[Syllogism, dict[str, str]]:
    """A natural-language syllogism for a figure/mood plus its gold FOL map."""
    s, m, p = terms
    layouts = {
        1: ((m, p), (s, m)),
        2: ((p, m), (s, m)),
        3: ((m, p), (m, s)),
        4: ((p, m), (m, s)),
    }
    major_terms, minor_terms = layouts[figure]
    kinds = [FormKind[mood[0]], FormKind[mood[1]], FormKind[mood[2]]]
    term_pairs = [major_terms, minor_terms, (s, p)]
    texts = [categorical_text(k, a, b) for k, (a, b) in zip(kinds, term_pairs)]
    fol_map = {
        text: render_latex(categorical_sentence(k, a, b))
        for text, k, (a, b) in zip(texts, kinds, term_pairs)
    }
    sample = Syllogism(
        id=sample_id,
        premises=tuple(texts[:2]),
        conclusion=texts[2],
        label_valid=label_valid,
        label_plausible=label_plausible,
        language=language,
    )
    return sample, fol_map


def script_multistep(stub: StubGateway, propositions: list[str],
                     fol_map: dict[str, str],
                     initial_name: str = "parser_initial",
                     default_name: str = "parser_default") -> None:
    """Script gold responses for the multistep parse of one syllogism.

    Mirrors the workflow's prompt construction: the first proposition uses
    the initial template, later ones carry the text -> formula context of
    every previously formalized proposition (duplicates reuse earlier
    entries and trigger no call).
    """
    initial = load_template(initial_name)
    default = load_template(default_name)
    rendered: list[tuple[str, str]] = []
    seen: set[str] = set()
    for i, text in enumerate(propositions):
        if text in seen:
            continue
        if i == 0:
            prompt = initial.render(proposition=text)
            template_name = initial_name
        else:
            prompt = default.render(
                previous_propositions="\n".join(f"{t} -> {f}" for t, f in rendered),
                proposition=text)
            template_name = default_name
        stub.script(template_name, prompt, f"\\boxed{{{fol_map[text]}}}")
        seen.add(text)
        rendered.append(
            (text, render_latex(parse_latex_formula(fol_map[text]))))


def stub_for_dataset(dataset: list[Syllogism],
                     fol_maps: dict[str, dict[str, str]]) -> StubGateway:
    """Gold-FOL stub covering the multistep flow for every sample."""
    stub = StubGateway()
    for sample in dataset:
        fol_map = fol_maps[sample.id]
        script_multistep(stub, [*sample.premises, sample.conclusion], fol_map)
    return stub


@pytest.fixture
def barbara_sample() -> tuple[Syllogism, dict[str, str]]:
    return mood_sample("barbara", 1, "AAA", ("dog", "mammal", "animal"),
                       label_valid=True, label_plausible=True)
