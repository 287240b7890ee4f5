"""Brute-force entailment oracle over small finite domains.

Independent of the type-space engine: sentences are evaluated directly by
structural recursion over explicit domain elements, and every interpretation
up to the requested domain size is tried. Monadic FOL has the finite model
property with bound 2^k for k predicates, so the sweep is complete when
max_domain reaches that bound.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Callable, Sequence

from ..fol.ast import (
    And,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    Sentence,
)
from .normal import UnsupportedError, ensure_monadic
from .typespace import (
    Engine,
    Model,
    ProverProblem,
    ProverVerdict,
    VerdictStatus,
    all_profiles,
    make_counterexample_verdict,
)

Domain = Sequence[frozenset[str]]
_Compiled = Callable[[dict, Domain], bool]


def compile_sentence(sentence: Sentence) -> _Compiled:
    """Compile to a closure evaluated against (environment, domain)."""
    return _compile(sentence.formula)


def _compile(f: Formula) -> _Compiled:
    if isinstance(f, Predicate):
        if len(f.args) != 1:
            raise UnsupportedError(f"predicate '{f.name}' is not unary")
        name = f.name
        var = f.args[0].name
        return lambda env, dom: name in env[var]
    if isinstance(f, Not):
        inner = _compile(f.inner)
        return lambda env, dom: not inner(env, dom)
    if isinstance(f, And):
        left, right = _compile(f.left), _compile(f.right)
        return lambda env, dom: left(env, dom) and right(env, dom)
    if isinstance(f, Or):
        left, right = _compile(f.left), _compile(f.right)
        return lambda env, dom: left(env, dom) or right(env, dom)
    if isinstance(f, Implies):
        left, right = _compile(f.left), _compile(f.right)
        return lambda env, dom: (not left(env, dom)) or right(env, dom)
    if isinstance(f, Iff):
        left, right = _compile(f.left), _compile(f.right)
        return lambda env, dom: left(env, dom) == right(env, dom)
    if isinstance(f, ForAll):
        var = f.var.name
        body = _compile(f.body)

        def forall_fn(env: dict, dom: Domain) -> bool:
            env = dict(env)  # snapshot; body may shadow outer bindings
            for element in dom:
                env[var] = element
                if not body(env, dom):
                    return False
            return True

        return forall_fn
    if isinstance(f, Exists):
        var = f.var.name
        body = _compile(f.body)

        def exists_fn(env: dict, dom: Domain) -> bool:
            env = dict(env)
            for element in dom:
                env[var] = element
                if body(env, dom):
                    return True
            return False

        return exists_fn
    raise TypeError(f"not a formula: {f!r}")


def holds(sentence: Sentence, domain: Domain) -> bool:
    """Direct evaluation of a closed sentence in a finite model."""
    if not domain:
        raise ValueError("models have nonempty domains")
    return compile_sentence(sentence)({}, domain)


def decide_by_domain_enumeration(problem: ProverProblem,
                                 max_domain: int) -> ProverVerdict:
    """Sweep all interpretations over domains up to the finite-model bound.

    Interpretations are enumerated as multisets of type profiles, which
    covers all models up to isomorphism. Raises UnsupportedError when
    max_domain < 2^k, since the sweep would be incomplete; domains beyond
    2^k realize no new profile combination, so the sweep stops there.
    """
    for s in (*problem.premises, problem.conclusion):
        ensure_monadic(s)
    predicates = problem.predicates()
    bound = 1 << len(predicates)
    if max_domain < bound:
        raise UnsupportedError(
            f"max_domain {max_domain} is below the completeness bound {bound}")
    profiles = all_profiles(predicates)
    premises = [compile_sentence(s) for s in problem.premises]
    conclusion = compile_sentence(problem.conclusion)
    for size in range(1, min(max_domain, bound) + 1):
        for domain in combinations_with_replacement(profiles, size):
            if all(p({}, domain) for p in premises) and not conclusion({}, domain):
                model = Model(frozenset(domain))
                return make_counterexample_verdict(
                    problem, model, Engine.DOMAIN_ENUMERATION)
    return ProverVerdict(VerdictStatus.ENTAILED, None, Engine.DOMAIN_ENUMERATION)
