"""Existential import and structural diagnostics for categorical syllogisms.

Universal propositions carry existential import in the classical reading
("all A are B" presupposes that some A exists), while boolean provers do
not assume nonempty terms. augment_existential_import bridges the gap by
asserting one existential sentence per term. The structure checks are
diagnostics only; validity is always decided by the prover.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .fol.ast import (
    And,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Predicate,
    Sentence,
    Variable,
    collect_predicates,
    predicate_arities,
)
from .prover.normal import UnsupportedError
from .prover.typespace import ProverProblem


class FormKind(Enum):
    A = "universal affirmative"
    E = "universal negative"
    I = "particular affirmative"
    O = "particular negative"
    INDIVIDUAL_AFFIRMATIVE = "individual affirmative"
    INDIVIDUAL_NEGATIVE = "individual negative"
    NON_CATEGORICAL = "non-categorical"


@dataclass(frozen=True)
class CategoricalForm:
    kind: FormKind
    subject: str | None
    predicate: str | None

    def __post_init__(self):
        has_terms = self.subject is not None and self.predicate is not None
        if (self.kind is FormKind.NON_CATEGORICAL) == has_terms:
            raise ValueError("subject/predicate present iff the form is categorical")


NON_CATEGORICAL = CategoricalForm(FormKind.NON_CATEGORICAL, None, None)


@dataclass(frozen=True)
class StructureReport:
    premise_count_ok: bool
    middle_term: str | None
    term_usage: dict[str, int]
    violations: tuple[str, ...]


def _import_sentence(term: str) -> Sentence:
    var = "y" if term == "x" else "x"
    v = Variable(var)
    return Sentence(Exists(v, Predicate(term, (v,))))


def _is_import_shape(sentence: Sentence, term: str) -> bool:
    f = sentence.formula
    return (isinstance(f, Exists)
            and isinstance(f.body, Predicate)
            and f.body.name == term
            and f.body.args == (f.var,))


def augment_existential_import(premises: Sequence[Sentence]) -> list[Sentence]:
    """Premises plus one existential sentence per distinct term. Idempotent.

    Terms are collected in first-occurrence order over all premises; a term
    whose import sentence is already present is skipped. Raises
    UnsupportedError for non-unary predicates.
    """
    for s in premises:
        for name, arities in predicate_arities(s.formula).items():
            if arities != {1}:
                raise UnsupportedError(f"predicate '{name}' is not unary")
    terms: list[str] = []
    for s in premises:
        for name in collect_predicates(s):
            if name not in terms:
                terms.append(name)
    out = list(premises)
    for term in terms:
        if not any(_is_import_shape(s, term) for s in premises):
            out.append(_import_sentence(term))
    return out


def _strip_double_negation(f: Formula) -> Formula:
    while isinstance(f, Not) and isinstance(f.inner, Not):
        f = f.inner.inner
    if isinstance(f, Not):
        return Not(_strip_double_negation(f.inner))
    if isinstance(f, (And, Implies)):
        return type(f)(_strip_double_negation(f.left),
                       _strip_double_negation(f.right))
    if isinstance(f, (ForAll, Exists)):
        return type(f)(f.var, _strip_double_negation(f.body))
    return f


def _atom_of(f: Formula, var: Variable) -> str | None:
    if isinstance(f, Predicate) and f.args == (var,):
        return f.name
    return None


def classify_categorical_form(sentence: Sentence) -> CategoricalForm:
    """Syntactic A/E/I/O recognition.

    Matching is up to conjunct order and double negation; anything deeper
    is reported as non-categorical and left to the prover.
    """
    f = _strip_double_negation(sentence.formula)

    if isinstance(f, ForAll):
        body = f.body
        if isinstance(body, Implies):
            subject = _atom_of(body.left, f.var)
            predicate = _atom_of(body.right, f.var)
            if subject and predicate:
                return CategoricalForm(FormKind.A, subject, predicate)
            if subject and isinstance(body.right, Not):
                negated = _atom_of(body.right.inner, f.var)
                if negated:
                    return CategoricalForm(FormKind.E, subject, negated)
        return NON_CATEGORICAL
    if isinstance(f, Not) and isinstance(f.inner, Exists):
        inner = f.inner
        if isinstance(inner.body, And):
            first = _atom_of(inner.body.left, inner.var)
            second = _atom_of(inner.body.right, inner.var)
            if first and second:
                return CategoricalForm(FormKind.E, first, second)
        return NON_CATEGORICAL
    if isinstance(f, Exists) and isinstance(f.body, And):
        left, right = f.body.left, f.body.right
        first = _atom_of(left, f.var)
        second = _atom_of(right, f.var)
        if first and second:
            return CategoricalForm(FormKind.I, first, second)
        # one negated conjunct in either position reads as the O form
        if first and isinstance(right, Not):
            negated = _atom_of(right.inner, f.var)
            if negated:
                return CategoricalForm(FormKind.O, first, negated)
        if second and isinstance(left, Not):
            negated = _atom_of(left.inner, f.var)
            if negated:
                return CategoricalForm(FormKind.O, second, negated)
    return NON_CATEGORICAL


def categorical_sentence(kind: FormKind, subject: str, predicate: str,
                         var: str = "x") -> Sentence:
    """Canonical FOL sentence for an A/E/I/O form."""
    v = Variable(var)
    s = Predicate(subject, (v,))
    p = Predicate(predicate, (v,))
    if kind is FormKind.A:
        return Sentence(ForAll(v, Implies(s, p)))
    if kind is FormKind.E:
        return Sentence(ForAll(v, Implies(s, Not(p))))
    if kind is FormKind.I:
        return Sentence(Exists(v, And(s, p)))
    if kind is FormKind.O:
        return Sentence(Exists(v, And(s, Not(p))))
    raise ValueError(f"no canonical sentence for {kind}")


def check_structure(premises: Sequence[Sentence],
                    conclusion: Sentence) -> StructureReport:
    """Diagnose the classical two-premise syllogistic structure.

    Checks: exactly two premises; every sentence categorical; exactly three
    distinct terms; a middle term shared by both premises and absent from
    the conclusion; each conclusion term appearing in exactly one premise.
    """
    violations: list[str] = []
    premise_count_ok = len(premises) == 2
    if not premise_count_ok:
        violations.append(f"expected exactly 2 premises, found {len(premises)}")

    forms = [classify_categorical_form(p) for p in premises]
    conclusion_form = classify_categorical_form(conclusion)
    for i, form in enumerate(forms):
        if form.kind is FormKind.NON_CATEGORICAL:
            violations.append(f"premise {i} is not a categorical proposition")
    if conclusion_form.kind is FormKind.NON_CATEGORICAL:
        violations.append("conclusion is not a categorical proposition")

    term_usage: dict[str, int] = {}
    sentence_terms: list[set[str]] = []
    for form in [*forms, conclusion_form]:
        terms = {t for t in (form.subject, form.predicate) if t is not None}
        sentence_terms.append(terms)
        for t in terms:
            term_usage[t] = term_usage.get(t, 0) + 1

    middle_term: str | None = None
    categorical = (premise_count_ok
                   and all(f.kind is not FormKind.NON_CATEGORICAL for f in forms)
                   and conclusion_form.kind is not FormKind.NON_CATEGORICAL)
    if categorical:
        distinct = set(term_usage)
        if len(distinct) != 3:
            violations.append(
                f"expected exactly 3 distinct terms, found {len(distinct)}")
        shared = sentence_terms[0] & sentence_terms[1]
        conclusion_terms = sentence_terms[2]
        if not shared:
            violations.append("premises share no middle term")
        else:
            middle_candidates = shared - conclusion_terms
            for term in sorted(shared & conclusion_terms):
                violations.append(f"middle term '{term}' appears in the conclusion")
            if len(middle_candidates) == 1:
                middle_term = next(iter(middle_candidates))
            elif len(middle_candidates) > 1:
                violations.append("premises share more than one candidate middle term")
        subject, predicate = conclusion_form.subject, conclusion_form.predicate
        minor_hits = [i for i in (0, 1) if subject in sentence_terms[i]]
        major_hits = [i for i in (0, 1) if predicate in sentence_terms[i]]
        if len(minor_hits) != 1:
            violations.append(
                f"conclusion subject '{subject}' must appear in exactly one premise")
        if len(major_hits) != 1:
            violations.append(
                f"conclusion predicate '{predicate}' must appear in exactly one premise")
        elif len(minor_hits) == 1 and minor_hits == major_hits:
            violations.append(
                "conclusion subject and predicate come from the same premise")

    return StructureReport(
        premise_count_ok=premise_count_ok,
        middle_term=middle_term,
        term_usage=term_usage,
        violations=tuple(violations),
    )


# figure layout: (major premise terms, minor premise terms) with S the
# conclusion subject, P the conclusion predicate and M the middle term
_FIGURE_LAYOUT = {
    1: (("M", "P"), ("S", "M")),
    2: (("P", "M"), ("S", "M")),
    3: (("M", "P"), ("M", "S")),
    4: (("P", "M"), ("M", "S")),
}

MOOD_LETTERS = "AEIO"


def figure_mood_problem(figure: int, mood: str,
                        terms: tuple[str, str, str] = ("s", "m", "p")) -> ProverProblem:
    """ProverProblem for one of the 256 figure/mood combinations.

    ``mood`` is three letters from AEIO, ordered major premise, minor
    premise, conclusion. ``terms`` supplies (S, M, P).
    """
    if figure not in _FIGURE_LAYOUT:
        raise ValueError(f"figure must be 1..4, got {figure}")
    if len(mood) != 3 or any(c not in MOOD_LETTERS for c in mood):
        raise ValueError(f"mood must be three of A/E/I/O, got {mood!r}")
    s, m, p = terms
    names = {"S": s, "M": m, "P": p}
    major_terms, minor_terms = _FIGURE_LAYOUT[figure]
    major = categorical_sentence(FormKind[mood[0]], names[major_terms[0]],
                                 names[major_terms[1]])
    minor = categorical_sentence(FormKind[mood[1]], names[minor_terms[0]],
                                 names[minor_terms[1]])
    conclusion = categorical_sentence(FormKind[mood[2]], s, p)
    return ProverProblem((major, minor), conclusion)


def all_figure_mood_problems() -> Iterator[tuple[int, str, ProverProblem]]:
    for figure in (1, 2, 3, 4):
        for a in MOOD_LETTERS:
            for b in MOOD_LETTERS:
                for c in MOOD_LETTERS:
                    mood = a + b + c
                    yield figure, mood, figure_mood_problem(figure, mood)
