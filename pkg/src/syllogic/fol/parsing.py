"""Token stream and precedence parser shared by the LaTeX and Prover9 syntaxes.

Precedence, tightest first: negation, conjunction, disjunction, implication
(right-associative), equivalence. A quantifier's scope is the smallest
following formula at negation level, so a multi-connective body must be
parenthesized. When an unparenthesized quantifier body is immediately
followed by a binary connective the parse is rejected with
AmbiguousScopeError instead of guessing which reading was meant.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    And,
    AmbiguousScopeError,
    Exists,
    ForAll,
    Formula,
    FormulaSyntaxError,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    UnsupportedFeatureError,
    Variable,
)

# token kinds
FORALL = "forall"
EXISTS = "exists"
AND = "and"
OR = "or"
NOT = "not"
IMPLIES = "implies"
IMPLIED_BY = "implied_by"
IFF = "iff"
LPAREN = "("
RPAREN = ")"
COMMA = ","
IDENT = "ident"
EOF = "eof"

BINARY_KINDS = (AND, OR, IMPLIES, IMPLIED_BY, IFF)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._index = 0

    def peek(self) -> Token:
        return self._tokens[self._index]

    def next(self) -> Token:
        tok = self._tokens[self._index]
        if tok.kind != EOF:
            self._index += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(
                f"unexpected {describe(tok)}", tok.position, (kind,))
        return self.next()


def describe(tok: Token) -> str:
    if tok.kind == EOF:
        return "end of input"
    return f"token {tok.text!r}"


def parse_tokens(tokens: list[Token]) -> Formula:
    """Parse a complete token list (EOF-terminated) into a Formula."""
    stream = _TokenStream(tokens)
    formula, _ = _parse_iff(stream)
    tok = stream.peek()
    if tok.kind != EOF:
        raise FormulaSyntaxError(f"unexpected {describe(tok)}", tok.position, (EOF,))
    return formula


def _reject_open_scope(stream: _TokenStream, open_scope: bool) -> None:
    tok = stream.peek()
    if open_scope and tok.kind in BINARY_KINDS:
        raise AmbiguousScopeError(
            "connective follows an unparenthesized quantifier body; "
            "parenthesize the intended scope", tok.position)


def _parse_iff(stream) -> tuple[Formula, bool]:
    left, open_scope = _parse_implies(stream)
    _reject_open_scope(stream, open_scope)
    if stream.peek().kind == IFF:
        stream.next()
        right, open_scope = _parse_iff(stream)
        return Iff(left, right), open_scope
    return left, open_scope


def _parse_implies(stream) -> tuple[Formula, bool]:
    left, open_scope = _parse_or(stream)
    _reject_open_scope(stream, open_scope)
    kind = stream.peek().kind
    if kind == IMPLIES:
        stream.next()
        right, open_scope = _parse_implies(stream)
        return Implies(left, right), open_scope
    if kind == IMPLIED_BY:
        # reversed implication, accepted on the Prover9 side only; no chaining
        stream.next()
        right, open_scope = _parse_or(stream)
        _reject_open_scope(stream, open_scope)
        after = stream.peek()
        if after.kind in (IMPLIES, IMPLIED_BY):
            raise FormulaSyntaxError(
                "chained implication arrows are not supported", after.position)
        return Implies(right, left), open_scope
    return left, open_scope


def _parse_or(stream) -> tuple[Formula, bool]:
    left, open_scope = _parse_and(stream)
    while True:
        _reject_open_scope(stream, open_scope)
        if stream.peek().kind != OR:
            return left, open_scope
        stream.next()
        right, open_scope = _parse_and(stream)
        left = Or(left, right)


def _parse_and(stream) -> tuple[Formula, bool]:
    left, open_scope = _parse_unary(stream)
    while True:
        _reject_open_scope(stream, open_scope)
        if stream.peek().kind != AND:
            return left, open_scope
        stream.next()
        right, open_scope = _parse_unary(stream)
        left = And(left, right)


def _parse_unary(stream) -> tuple[Formula, bool]:
    tok = stream.peek()
    if tok.kind == NOT:
        stream.next()
        inner, open_scope = _parse_unary(stream)
        return Not(inner), open_scope
    if tok.kind in (FORALL, EXISTS):
        stream.next()
        var_tok = stream.expect(IDENT)
        body_open = stream.peek().kind != LPAREN
        body, inner_open = _parse_unary(stream)
        cls = ForAll if tok.kind == FORALL else Exists
        return cls(Variable(var_tok.text), body), body_open or inner_open
    if tok.kind == LPAREN:
        stream.next()
        inner, _ = _parse_iff(stream)
        stream.expect(RPAREN)
        return inner, False
    if tok.kind == IDENT:
        return _parse_atom(stream), False
    raise FormulaSyntaxError(
        f"unexpected {describe(tok)}", tok.position,
        (IDENT, NOT, FORALL, EXISTS, LPAREN))


def _parse_atom(stream) -> Predicate:
    name_tok = stream.expect(IDENT)
    opener = stream.peek()
    if opener.kind != LPAREN:
        raise FormulaSyntaxError(
            f"predicate '{name_tok.text}' must be applied to arguments",
            opener.position, (LPAREN,))
    stream.next()
    args: list[Variable] = []
    while True:
        arg_tok = stream.expect(IDENT)
        nxt = stream.peek()
        if nxt.kind == LPAREN:
            raise UnsupportedFeatureError(
                f"function application '{arg_tok.text}(...)' is not supported")
        args.append(Variable(arg_tok.text))
        if nxt.kind == COMMA:
            stream.next()
            continue
        stream.expect(RPAREN)
        break
    return Predicate(name_tok.text, tuple(args))
