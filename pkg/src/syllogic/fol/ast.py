"""Abstract syntax trees for first-order formulas over unary-style predicates.

Formulas are immutable; structural equality and hashing come from the frozen
dataclasses, so ASTs can be used as dict keys and compared directly in tests.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

IDENTIFIER_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


class FolError(Exception):
    """Base class for formula construction and parsing errors."""


class FormulaSyntaxError(FolError):
    """Input text is not a well-formed formula.

    ``position`` is a 0-based character offset into the (stripped) input and
    ``expected`` lists the token kinds that would have been accepted there.
    """

    def __init__(self, message: str, position: int | None = None,
                 expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = message
        if position is not None:
            detail += f" (at position {position}"
            if expected:
                detail += ", expected " + " or ".join(expected)
            detail += ")"
        super().__init__(detail)


class AmbiguousScopeError(FormulaSyntaxError):
    """A quantifier with an unparenthesized body is followed by a connective.

    ``\\forall x p(x) \\rightarrow q(x)`` is rejected rather than silently
    read with the narrow scope; writers must parenthesize the intended body.
    """


class UnboundVariableError(FolError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable '{name}'")


class EmptyInputError(FolError):
    def __init__(self):
        super().__init__("empty input")


class UnsupportedFeatureError(FolError):
    """Equality, functions and constants are outside the supported fragment."""


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name or any(c.isspace() for c in self.name):
            raise ValueError(f"invalid variable name {self.name!r}")


class Formula:
    """Base class; concrete nodes are the frozen dataclasses below."""

    __slots__ = ()


@dataclass(frozen=True)
class Predicate(Formula):
    name: str
    args: tuple[Variable, ...]

    def __post_init__(self):
        if not IDENTIFIER_RE.match(self.name):
            raise ValueError(f"invalid predicate name {self.name!r}")
        if not self.args:
            raise ValueError("nullary atoms are not allowed")


@dataclass(frozen=True)
class Not(Formula):
    inner: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: Variable
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Variable
    body: Formula


BINARY_TYPES = (And, Or, Implies, Iff)
QUANTIFIER_TYPES = (ForAll, Exists)


def free_variables(formula: Formula) -> set[str]:
    if isinstance(formula, Predicate):
        return {v.name for v in formula.args}
    if isinstance(formula, Not):
        return free_variables(formula.inner)
    if isinstance(formula, BINARY_TYPES):
        return free_variables(formula.left) | free_variables(formula.right)
    if isinstance(formula, QUANTIFIER_TYPES):
        return free_variables(formula.body) - {formula.var.name}
    raise TypeError(f"not a formula: {formula!r}")


def bound_variable_names(formula: Formula) -> set[str]:
    if isinstance(formula, Predicate):
        return set()
    if isinstance(formula, Not):
        return bound_variable_names(formula.inner)
    if isinstance(formula, BINARY_TYPES):
        return bound_variable_names(formula.left) | bound_variable_names(formula.right)
    if isinstance(formula, QUANTIFIER_TYPES):
        return {formula.var.name} | bound_variable_names(formula.body)
    raise TypeError(f"not a formula: {formula!r}")


def predicate_names(formula: Formula) -> list[str]:
    """Predicate names in first-occurrence order, deduplicated."""
    out: list[str] = []
    seen: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, Predicate):
            if f.name not in seen:
                seen.add(f.name)
                out.append(f.name)
        elif isinstance(f, Not):
            walk(f.inner)
        elif isinstance(f, BINARY_TYPES):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, QUANTIFIER_TYPES):
            walk(f.body)
        else:
            raise TypeError(f"not a formula: {f!r}")

    walk(formula)
    return out


def predicate_arities(formula: Formula) -> dict[str, set[int]]:
    arities: dict[str, set[int]] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, Predicate):
            arities.setdefault(f.name, set()).add(len(f.args))
        elif isinstance(f, Not):
            walk(f.inner)
        elif isinstance(f, BINARY_TYPES):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, QUANTIFIER_TYPES):
            walk(f.body)

    walk(formula)
    return arities


@dataclass(frozen=True)
class Sentence:
    """A closed formula. Construction from an open formula is an error."""

    formula: Formula

    def __post_init__(self):
        free = free_variables(self.formula)
        if free:
            raise UnboundVariableError(sorted(free)[0])
        clash = set(predicate_names(self.formula)) & bound_variable_names(self.formula)
        if clash:
            name = sorted(clash)[0]
            raise FormulaSyntaxError(
                f"name '{name}' is used both as a predicate and as a bound variable")


@dataclass(frozen=True)
class PredicateMapping:
    """Ordered pairing of proposition texts with their parsed sentences."""

    entries: tuple[tuple[str, Sentence], ...]

    def __post_init__(self):
        texts = [t for t, _ in self.entries]
        if len(set(texts)) != len(texts):
            raise ValueError("duplicate proposition text in mapping")

    def sentence_for(self, text: str) -> Sentence:
        for t, s in self.entries:
            if t == text:
                return s
        raise KeyError(text)

    def sentences(self) -> list[Sentence]:
        return [s for _, s in self.entries]


def collect_predicates(sentence: Sentence | Formula) -> list[str]:
    """First-occurrence-ordered predicate names of a sentence."""
    formula = sentence.formula if isinstance(sentence, Sentence) else sentence
    return predicate_names(formula)
