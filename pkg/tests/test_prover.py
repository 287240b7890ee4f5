"""Embedded prover: normalization, satisfiability, and oracle agreement."""
from __future__ import annotations

import random

import pytest

from syllogic.fol import (
    And,
    Exists,
    ForAll,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    Sentence,
    Variable,
    parse_latex_formula,
)
from syllogic.prover import (
    BoolCombo,
    Engine,
    Existential,
    Model,
    ProverProblem,
    ProverVerdict,
    Universal,
    UnsupportedError,
    VerdictStatus,
    check_satisfiable,
    decide_by_domain_enumeration,
    decide_entailment,
    holds,
    normalize,
)

P = parse_latex_formula


def V(name):
    return Variable(name)


def atom(name, var="x"):
    return Predicate(name, (V(var),))


class TestNormalize:
    def test_negated_universal_becomes_existential(self):
        result = normalize(P(r"\neg \forall x (p(x) \rightarrow q(x))"))
        assert result == Existential(And(atom("p"), Not(atom("q"))))

    def test_sentence_level_conjunction(self):
        result = normalize(P(r"(\exists x (p(x)) \land \forall x (p(x) \rightarrow q(x)))"))
        assert result == BoolCombo("and", (
            Existential(atom("p")),
            Universal(Implies(atom("p"), atom("q"))),
        ))

    def test_independent_nested_quantifiers_split(self):
        result = normalize(P(r"\forall x (\exists y (p(x) \land q(y)))"))
        assert result == BoolCombo("and", (
            Universal(atom("p")),
            Existential(atom("q", "y")),
        ))

    def test_non_unary_rejected(self):
        with pytest.raises(UnsupportedError):
            normalize(P(r"\forall x (\forall y (r(x, y)))"))


class TestCheckSatisfiable:
    def test_direct_contradiction(self):
        sentences = [P(r"\forall x (p(x) \rightarrow q(x))"),
                     P(r"\exists x (p(x) \land \neg q(x))")]
        assert check_satisfiable(sentences) is None

    def test_satisfiable_with_witness(self):
        model = check_satisfiable([P(r"\forall x (p(x) \rightarrow q(x))"),
                                   P(r"\exists x (q(x))")])
        assert model is not None
        assert frozenset({"q"}) in model.realized_types

    def test_empty_theory(self):
        model = check_satisfiable([])
        assert model is not None
        assert model.realized_types == frozenset({frozenset()})


class TestDecideEntailment:
    def test_transitivity_chain(self):
        problem = ProverProblem(
            (P(r"\forall x (animal(x) \rightarrow flightless(x))"),
             P(r"\forall x (bird(x) \rightarrow animal(x))")),
            P(r"\neg \exists x (bird(x) \land \neg flightless(x))"))
        assert decide_entailment(problem).status is VerdictStatus.ENTAILED

    def test_countermodel_from_satisfiability(self):
        problem = ProverProblem(
            (P(r"\forall x (p(x) \rightarrow q(x))"), P(r"\exists x (q(x))")),
            P(r"\exists x (p(x))"))
        verdict = decide_entailment(problem)
        assert verdict.status is VerdictStatus.NOT_ENTAILED
        assert verdict.countermodel is not None
        assert frozenset({"q"}) in verdict.countermodel.realized_types

    def test_tautology_from_no_premises(self):
        problem = ProverProblem(
            (), P(r"(\exists x (p(x)) \lor \neg \exists x (p(x)))"))
        assert decide_entailment(problem).status is VerdictStatus.ENTAILED

    def test_verdict_invariant_rejects_missing_countermodel(self):
        with pytest.raises(ValueError):
            ProverVerdict(VerdictStatus.NOT_ENTAILED, None, Engine.TYPE_SPACE)
        with pytest.raises(ValueError):
            ProverVerdict(VerdictStatus.ENTAILED,
                          Model(frozenset({frozenset()})), Engine.TYPE_SPACE)


class TestDomainEnumeration:
    def test_barbara(self):
        problem = ProverProblem(
            (P(r"\forall x (m(x) \rightarrow p(x))"),
             P(r"\forall x (s(x) \rightarrow m(x))")),
            P(r"\forall x (s(x) \rightarrow p(x))"))
        assert decide_by_domain_enumeration(problem, 8).status is VerdictStatus.ENTAILED

    def test_bound_checked(self):
        problem = ProverProblem(
            (P(r"\forall x (m(x) \rightarrow p(x))"),
             P(r"\forall x (s(x) \rightarrow m(x))")),
            P(r"\forall x (s(x) \rightarrow p(x))"))
        with pytest.raises(UnsupportedError):
            decide_by_domain_enumeration(problem, 4)


def random_matrix(rng: random.Random, preds, var, depth):
    if depth <= 0 or rng.random() < 0.35:
        a = Predicate(rng.choice(preds), (V(var),))
        return Not(a) if rng.random() < 0.3 else a
    cls = rng.choice([And, Or, Implies, Iff])
    return cls(random_matrix(rng, preds, var, depth - 1),
               random_matrix(rng, preds, var, depth - 1))


def random_supported_sentence(rng: random.Random, preds) -> Sentence:
    """Random monadic sentence within the engine's fragment."""
    roll = rng.random()
    var = rng.choice(["x", "y", "z"])
    quantifier = ForAll if rng.random() < 0.5 else Exists
    if roll < 0.55:
        return Sentence(quantifier(V(var), random_matrix(rng, preds, var, 3)))
    if roll < 0.7:
        inner = random_supported_sentence(rng, preds)
        return Sentence(Not(inner.formula))
    if roll < 0.85:
        cls = rng.choice([And, Or, Implies])
        left = random_supported_sentence(rng, preds)
        right = random_supported_sentence(rng, preds)
        return Sentence(cls(left.formula, right.formula))
    # quantifier body mixing a matrix with an independent closed subsentence
    closed = random_supported_sentence(rng, preds)
    mix = rng.choice([And, Or])
    body = mix(random_matrix(rng, preds, var, 2), closed.formula)
    return Sentence(quantifier(V(var), body))


def random_problem(rng: random.Random) -> ProverProblem:
    k = rng.randint(1, 3)
    preds = ["f", "g", "h"][:k]
    n_premises = rng.randint(0, 3)
    premises = tuple(random_supported_sentence(rng, preds)
                     for _ in range(n_premises))
    return ProverProblem(premises, random_supported_sentence(rng, preds))


class TestOracleEquivalence:
    def test_thousand_random_problems(self):
        rng = random.Random(424242)
        agreements = 0
        for _ in range(1000):
            problem = random_problem(rng)
            fast = decide_entailment(problem)
            slow = decide_by_domain_enumeration(
                problem, 1 << len(problem.predicates()))
            assert fast.status == slow.status, problem
            agreements += 1
        assert agreements == 1000

    def test_countermodels_validate_against_direct_evaluator(self):
        rng = random.Random(77)
        checked = 0
        for _ in range(300):
            problem = random_problem(rng)
            verdict = decide_entailment(problem)
            if verdict.status is VerdictStatus.NOT_ENTAILED:
                domain = verdict.countermodel.domain()
                assert all(holds(p, domain) for p in problem.premises)
                assert not holds(problem.conclusion, domain)
                checked += 1
        assert checked > 50  # the generator must exercise the countermodel path


class TestLogicalProperties:
    def test_monotonicity(self):
        rng = random.Random(5)
        seen = 0
        while seen < 60:
            problem = random_problem(rng)
            if decide_entailment(problem).status is not VerdictStatus.ENTAILED:
                continue
            extra = random_supported_sentence(rng, ["f", "g", "h"])
            bigger = ProverProblem((*problem.premises, extra), problem.conclusion)
            assert decide_entailment(bigger).status is VerdictStatus.ENTAILED
            seen += 1

    def test_ex_falso(self):
        rng = random.Random(6)
        contradiction = (P(r"\forall x (f(x) \rightarrow g(x))"),
                         P(r"\exists x (f(x) \land \neg g(x))"))
        assert check_satisfiable(list(contradiction)) is None
        for _ in range(50):
            conclusion = random_supported_sentence(rng, ["f", "g", "h"])
            problem = ProverProblem(contradiction, conclusion)
            assert decide_entailment(problem).status is VerdictStatus.ENTAILED
