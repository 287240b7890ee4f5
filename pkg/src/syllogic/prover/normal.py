"""Quantifier-depth-1 normal form for monadic sentences.

A NormalSentence is either a quantified leaf, Universal(matrix) or
Existential(matrix) with the matrix a propositional formula over atoms of
one variable, or a BoolCombo of normal sentences under "and"/"or".
Sentence-level negation is absorbed into the leaves through quantifier
duality, and nested quantifiers are separated by bottom-up miniscoping.
With only unary predicates every quantifier separates, so any monadic
sentence normalizes to this shape.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

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
    Variable,
    free_variables,
    predicate_arities,
)


class UnsupportedError(Exception):
    """Outside the decidable fragment handled by the embedded engines."""


@dataclass(frozen=True)
class Universal:
    matrix: Formula


@dataclass(frozen=True)
class Existential:
    matrix: Formula


@dataclass(frozen=True)
class BoolCombo:
    op: str  # "and" | "or"
    parts: tuple["NormalSentence", ...]


NormalSentence = Universal | Existential | BoolCombo


def _combo(op: str, parts: list[NormalSentence]) -> NormalSentence:
    if len(parts) == 1:
        return parts[0]
    return BoolCombo(op, tuple(parts))


def ensure_monadic(sentence: Sentence) -> None:
    for name, arities in predicate_arities(sentence.formula).items():
        if arities != {1}:
            raise UnsupportedError(
                f"predicate '{name}' is not unary (arities {sorted(arities)})")


def normalize(sentence: Sentence) -> NormalSentence:
    """Logically equivalent depth-at-most-1 form of a monadic sentence.

    Raises UnsupportedError for non-unary predicates; negations are pushed
    through quantifiers, and independent nested quantifiers are separated.
    """
    ensure_monadic(sentence)
    return _norm(sentence.formula, negated=False)


def _norm(f: Formula, negated: bool) -> NormalSentence:
    if isinstance(f, Not):
        return _norm(f.inner, not negated)
    if isinstance(f, (ForAll, Exists)):
        return _norm_quantifier(f, negated)
    if isinstance(f, And):
        if negated:
            return _combo("or", [_norm(f.left, True), _norm(f.right, True)])
        return _combo("and", [_norm(f.left, False), _norm(f.right, False)])
    if isinstance(f, Or):
        if negated:
            return _combo("and", [_norm(f.left, True), _norm(f.right, True)])
        return _combo("or", [_norm(f.left, False), _norm(f.right, False)])
    if isinstance(f, Implies):
        if negated:  # left and not right
            return _combo("and", [_norm(f.left, False), _norm(f.right, True)])
        return _combo("or", [_norm(f.left, True), _norm(f.right, False)])
    if isinstance(f, Iff):
        if negated:
            return _combo("or", [
                _combo("and", [_norm(f.left, False), _norm(f.right, True)]),
                _combo("and", [_norm(f.left, True), _norm(f.right, False)]),
            ])
        return _combo("and", [
            _combo("or", [_norm(f.left, True), _norm(f.right, False)]),
            _combo("or", [_norm(f.left, False), _norm(f.right, True)]),
        ])
    raise UnsupportedError(f"cannot normalize open formula {f!r}")


def _norm_quantifier(f: ForAll | Exists, negated: bool) -> NormalSentence:
    kind = "forall" if isinstance(f, ForAll) else "exists"
    if negated:
        kind = "exists" if kind == "forall" else "forall"
    var = f.var.name
    body = f.body
    if not _has_quantifier(body):
        # body is already a one-variable matrix; keep it verbatim
        matrix = _negate_matrix(body) if negated else body
        return _leaf(kind, matrix)
    pushed = _distribute(kind, var, _push_quantifiers(_nnf(body, negated)))
    return _norm(pushed, negated=False)


def _leaf(kind: str, matrix: Formula) -> NormalSentence:
    return Universal(matrix) if kind == "forall" else Existential(matrix)


def _quant(kind: str, var: str, body: Formula) -> Formula:
    cls = ForAll if kind == "forall" else Exists
    return cls(Variable(var), body)


def _has_quantifier(f: Formula) -> bool:
    if isinstance(f, (ForAll, Exists)):
        return True
    if isinstance(f, Not):
        return _has_quantifier(f.inner)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _has_quantifier(f.left) or _has_quantifier(f.right)
    return False


def _negate_matrix(f: Formula) -> Formula:
    """Negation-normal complement of a quantifier-free matrix."""
    if isinstance(f, Predicate):
        return Not(f)
    if isinstance(f, Not):
        return f.inner
    if isinstance(f, And):
        return Or(_negate_matrix(f.left), _negate_matrix(f.right))
    if isinstance(f, Or):
        return And(_negate_matrix(f.left), _negate_matrix(f.right))
    if isinstance(f, Implies):
        return And(f.left, _negate_matrix(f.right))
    if isinstance(f, Iff):
        return Or(And(f.left, _negate_matrix(f.right)),
                  And(_negate_matrix(f.left), f.right))
    raise TypeError(f"not a matrix: {f!r}")


def _nnf(f: Formula, negated: bool) -> Formula:
    """Negation normal form; implications eliminated, quantifiers kept."""
    if isinstance(f, Predicate):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _nnf(f.inner, not negated)
    if isinstance(f, And):
        cls = Or if negated else And
        return cls(_nnf(f.left, negated), _nnf(f.right, negated))
    if isinstance(f, Or):
        cls = And if negated else Or
        return cls(_nnf(f.left, negated), _nnf(f.right, negated))
    if isinstance(f, Implies):
        if negated:
            return And(_nnf(f.left, False), _nnf(f.right, True))
        return Or(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        if negated:
            return Or(And(_nnf(f.left, False), _nnf(f.right, True)),
                      And(_nnf(f.left, True), _nnf(f.right, False)))
        return And(Or(_nnf(f.left, True), _nnf(f.right, False)),
                   Or(_nnf(f.left, False), _nnf(f.right, True)))
    if isinstance(f, ForAll):
        cls, flip = (Exists, True) if negated else (ForAll, False)
        return cls(f.var, _nnf(f.body, flip))
    if isinstance(f, Exists):
        cls, flip = (ForAll, True) if negated else (Exists, False)
        return cls(f.var, _nnf(f.body, flip))
    raise TypeError(f"not a formula: {f!r}")


def _push_quantifiers(f: Formula) -> Formula:
    """Bottom-up miniscoping of an NNF formula."""
    if isinstance(f, (And, Or)):
        return type(f)(_push_quantifiers(f.left), _push_quantifiers(f.right))
    if isinstance(f, (ForAll, Exists)):
        kind = "forall" if isinstance(f, ForAll) else "exists"
        return _distribute(kind, f.var.name, _push_quantifiers(f.body))
    return f  # literal


def _distribute(kind: str, var: str, body: Formula) -> Formula:
    """Push one quantifier into a body whose inner quantifiers are separated."""
    if var not in free_variables(body):
        return body  # vacuous under nonempty-domain semantics
    if not _has_quantifier(body) and free_variables(body) == {var}:
        return _quant(kind, var, body)
    if isinstance(body, And) and kind == "forall":
        return And(_distribute(kind, var, body.left),
                   _distribute(kind, var, body.right))
    if isinstance(body, Or) and kind == "exists":
        return Or(_distribute(kind, var, body.left),
                  _distribute(kind, var, body.right))
    if isinstance(body, (And, Or)):
        op = And if isinstance(body, And) else Or
        parts = _flatten(body, op)
        var_parts = [p for p in parts if var in free_variables(p)]
        free_parts = [p for p in parts if var not in free_variables(p)]
        if free_parts:
            # pull variable-free parts out of the scope, preserving order
            residual = _distribute(kind, var, _join(op, var_parts))
            out: list[Formula] = []
            emitted = False
            for p in parts:
                if var in free_variables(p):
                    if not emitted:
                        out.append(residual)
                        emitted = True
                else:
                    out.append(p)
            return _join(op, out)
        # every part mentions the variable and some part holds a quantifier:
        # expand to clauses over literals and quantified units, then recurse
        clauses = _expand(body, primary=op)
        if len(clauses) == 1:
            # flat clause that cannot be split further: genuinely dependent
            raise UnsupportedError(
                f"quantified subformula depends on outer variable '{var}'")
        dual = Or if op is And else And
        return _join(dual, [_distribute(kind, var, _join(op, c)) for c in clauses])
    if isinstance(body, (ForAll, Exists)):
        raise UnsupportedError(
            f"nested quantifier over '{body.var.name}' depends on outer "
            f"variable '{var}'")
    return _quant(kind, var, body)


def _flatten(f: Formula, op: type) -> list[Formula]:
    if isinstance(f, op):
        return _flatten(f.left, op) + _flatten(f.right, op)
    return [f]


def _join(op: type, parts: list[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = op(out, p)
    return out


def _expand(f: Formula, primary: type) -> list[list[Formula]]:
    """Clauses of f under the primary connective (DNF for And, CNF for Or).

    Units are literals and quantified subformulas; the surrounding
    distribution step requires each clause to mix the quantified variable
    only through literals.
    """
    if isinstance(f, (And, Or)):
        left = _expand(f.left, primary)
        right = _expand(f.right, primary)
        if isinstance(f, primary):
            return [a + b for a, b in product(left, right)]
        return left + right
    return [[f]]
