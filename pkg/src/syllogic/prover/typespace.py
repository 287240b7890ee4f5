"""Decision procedure for monadic sentences via type profiles.

A monadic model is characterized by which type profiles (subsets of the
predicate set) it realizes. After normalization, sentence-level boolean
structure is case-split into disjunctive cases of quantified leaves; within
a case a universal leaf forbids every profile on which its matrix is false,
and the case is satisfiable when the allowed-profile set is nonempty and
each existential matrix has a witness among the allowed profiles. This is
sound and complete for depth-at-most-1 monadic sentences without equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator, Sequence

from ..fol.ast import (
    And,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    Sentence,
    collect_predicates,
)
from .normal import BoolCombo, Existential, NormalSentence, Universal, UnsupportedError, normalize


@dataclass(frozen=True)
class ProverProblem:
    premises: tuple[Sentence, ...]
    conclusion: Sentence

    def predicates(self) -> list[str]:
        out: list[str] = []
        for s in (*self.premises, self.conclusion):
            for name in collect_predicates(s):
                if name not in out:
                    out.append(name)
        return out


class VerdictStatus(Enum):
    ENTAILED = "entailed"
    NOT_ENTAILED = "not_entailed"
    UNSUPPORTED = "unsupported"


class Engine(Enum):
    TYPE_SPACE = "typespace"
    DOMAIN_ENUMERATION = "enumeration"
    EXTERNAL_PROVER9 = "prover9"


@dataclass(frozen=True)
class Model:
    """Finite monadic model: the nonempty set of realized type profiles."""

    realized_types: frozenset[frozenset[str]]

    def __post_init__(self):
        if not self.realized_types:
            raise ValueError("a model must realize at least one type")

    def domain(self) -> list[frozenset[str]]:
        return sorted(self.realized_types, key=lambda t: (len(t), sorted(t)))


@dataclass(frozen=True)
class ProverVerdict:
    status: VerdictStatus
    countermodel: Model | None
    engine: Engine

    def __post_init__(self):
        embedded = self.engine in (Engine.TYPE_SPACE, Engine.DOMAIN_ENUMERATION)
        should_have = self.status is VerdictStatus.NOT_ENTAILED and embedded
        if should_have != (self.countermodel is not None):
            raise ValueError("countermodel presence inconsistent with status/engine")


def eval_matrix(matrix: Formula, profile: frozenset[str]) -> bool:
    """Truth of a one-variable matrix on a type profile."""
    if isinstance(matrix, Predicate):
        return matrix.name in profile
    if isinstance(matrix, Not):
        return not eval_matrix(matrix.inner, profile)
    if isinstance(matrix, And):
        return eval_matrix(matrix.left, profile) and eval_matrix(matrix.right, profile)
    if isinstance(matrix, Or):
        return eval_matrix(matrix.left, profile) or eval_matrix(matrix.right, profile)
    if isinstance(matrix, Implies):
        return (not eval_matrix(matrix.left, profile)) or eval_matrix(matrix.right, profile)
    if isinstance(matrix, Iff):
        return eval_matrix(matrix.left, profile) == eval_matrix(matrix.right, profile)
    raise TypeError(f"not a matrix: {matrix!r}")


def all_profiles(predicates: Sequence[str]) -> list[frozenset[str]]:
    """All 2^k type profiles, smallest first, in a deterministic order."""
    out: list[frozenset[str]] = []
    for size in range(len(predicates) + 1):
        for bits in range(1 << len(predicates)):
            profile = frozenset(p for i, p in enumerate(predicates) if bits >> i & 1)
            if len(profile) == size and profile not in out:
                out.append(profile)
    return out


def _cases(ns: NormalSentence) -> Iterator[list[Universal | Existential]]:
    if isinstance(ns, (Universal, Existential)):
        yield [ns]
        return
    if ns.op == "or":
        for part in ns.parts:
            yield from _cases(part)
        return
    for chosen in product(*(_cases(p) for p in ns.parts)):
        case: list[Universal | Existential] = []
        for leaves in chosen:
            case.extend(leaves)
        yield case


def check_satisfiable(sentences: Sequence[Sentence]) -> Model | None:
    """A model of the sentences, or None when unsatisfiable.

    Raises UnsupportedError outside the monadic depth-separable fragment.
    """
    predicates: list[str] = []
    for s in sentences:
        for name in collect_predicates(s):
            if name not in predicates:
                predicates.append(name)
    profiles = all_profiles(predicates)
    if not sentences:
        return Model(frozenset({frozenset()}))

    normals = [normalize(s) for s in sentences]
    combined: NormalSentence = BoolCombo("and", tuple(normals)) if len(normals) > 1 else normals[0]

    for case in _cases(combined):
        universals = [leaf for leaf in case if isinstance(leaf, Universal)]
        existentials = [leaf for leaf in case if isinstance(leaf, Existential)]
        allowed = [t for t in profiles
                   if all(eval_matrix(u.matrix, t) for u in universals)]
        if not allowed:
            continue
        witnesses: list[frozenset[str]] = []
        for leaf in existentials:
            witness = next((t for t in allowed if eval_matrix(leaf.matrix, t)), None)
            if witness is None:
                break
            witnesses.append(witness)
        else:
            realized = frozenset(witnesses) if witnesses else frozenset({allowed[0]})
            return Model(realized)
    return None


def _negated(sentence: Sentence) -> Sentence:
    formula = sentence.formula
    if isinstance(formula, Not):
        return Sentence(formula.inner)
    return Sentence(Not(formula))


def decide_entailment(problem: ProverProblem) -> ProverVerdict:
    """Entailed iff premises plus the negated conclusion are unsatisfiable."""
    model = check_satisfiable([*problem.premises, _negated(problem.conclusion)])
    if model is None:
        return ProverVerdict(VerdictStatus.ENTAILED, None, Engine.TYPE_SPACE)
    return make_counterexample_verdict(problem, model, Engine.TYPE_SPACE)


def make_counterexample_verdict(problem: ProverProblem, model: Model,
                                engine: Engine) -> ProverVerdict:
    """NOT_ENTAILED verdict; the countermodel is re-checked on construction."""
    from .enumeration import holds  # independent direct evaluator

    problem_preds = set(problem.predicates())
    for profile in model.realized_types:
        if not profile <= problem_preds:
            raise ValueError(f"profile {set(profile)} not over problem predicates")
    domain = model.domain()
    if not all(holds(p, domain) for p in problem.premises):
        raise ValueError("countermodel does not satisfy every premise")
    if holds(problem.conclusion, domain):
        raise ValueError("countermodel does not falsify the conclusion")
    return ProverVerdict(VerdictStatus.NOT_ENTAILED, model, engine)
