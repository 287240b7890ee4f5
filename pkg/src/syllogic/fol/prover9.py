"""Prover9 clause syntax: rendering, input cleanup, and parsing.

Operator mapping: universal/existential quantifiers render as ``all`` and
``exists``; the connectives render as ``&``, ``|``, ``-``, ``->`` and
``<->``. Clauses are terminated by ``.``. Single-letter lowercase names
x y z u v w p q r are reserved for individual variables, so predicates with
those names are renamed by appending ``_pred``, consistently across a whole
problem.
"""
from __future__ import annotations

import re

from . import parsing
from .ast import (
    And,
    EmptyInputError,
    Exists,
    ForAll,
    Formula,
    FormulaSyntaxError,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    Sentence,
    UnsupportedFeatureError,
    predicate_names,
)
from .parsing import Token

RESERVED_VARIABLE_NAMES = frozenset({"x", "y", "z", "u", "v", "w", "p", "q", "r"})

# LaTeX remnants that LLMs leave in Prover9 output, mapped to prover tokens.
_LATEX_REMNANTS = {
    "rightarrow": "->",
    "to": "->",
    "Rightarrow": "->",
    "leftrightarrow": "<->",
    "land": "&",
    "wedge": "&",
    "lor": "|",
    "vee": "|",
    "neg": "-",
    "lnot": "-",
    "forall": "all",
    "exists": "exists",
}

_REMNANT_RE = re.compile(r"\\([a-zA-Z]+)")
_IDENT_TOKEN_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


def rename_reserved_predicates(sentences: list[Sentence] | Sentence) -> dict[str, str]:
    """Renaming map for predicates clashing with reserved variable names.

    Computed over all sentences of a problem so the suffix is applied
    consistently; keeps appending ``_pred`` until the name is free.
    """
    if isinstance(sentences, Sentence):
        sentences = [sentences]
    names: list[str] = []
    for s in sentences:
        for name in predicate_names(s.formula):
            if name not in names:
                names.append(name)
    taken = set(names)
    mapping: dict[str, str] = {}
    for name in names:
        if name not in RESERVED_VARIABLE_NAMES:
            continue
        renamed = name + "_pred"
        while renamed in taken:
            renamed += "_pred"
        taken.add(renamed)
        mapping[name] = renamed
    return mapping


def render_prover9(sentence: Sentence, renaming: dict[str, str] | None = None) -> str:
    """Render one sentence as a ``.``-terminated Prover9 clause. Never fails."""
    if renaming is None:
        renaming = rename_reserved_predicates(sentence)
    return _render(sentence.formula, renaming) + "."


def _render(f: Formula, renaming: dict[str, str]) -> str:
    if isinstance(f, Predicate):
        name = renaming.get(f.name, f.name)
        return f"{name}({','.join(v.name for v in f.args)})"
    if isinstance(f, Not):
        inner = _render(f.inner, renaming)
        if not inner.startswith("("):
            inner = f"({inner})"
        return "-" + inner
    if isinstance(f, And):
        return f"({_render(f.left, renaming)} & {_render(f.right, renaming)})"
    if isinstance(f, Or):
        return f"({_render(f.left, renaming)} | {_render(f.right, renaming)})"
    if isinstance(f, Implies):
        return f"({_render(f.left, renaming)} -> {_render(f.right, renaming)})"
    if isinstance(f, Iff):
        return f"({_render(f.left, renaming)} <-> {_render(f.right, renaming)})"
    if isinstance(f, (ForAll, Exists)):
        keyword = "all" if isinstance(f, ForAll) else "exists"
        body = _render(f.body, renaming)
        if not (body.startswith("(") and isinstance(f.body, (And, Or, Implies, Iff))):
            body = f"({body})"
        return f"{keyword} {f.var.name} {body}"
    raise TypeError(f"not a formula: {f!r}")


def cleanup(text: str) -> str:
    """Regex cleanup applied before parsing LLM-produced Prover9 text.

    Translates LaTeX operator remnants to prover tokens, drops ``$`` and
    ``;`` characters and stray trailing periods. Idempotent.
    """
    def sub(match: re.Match) -> str:
        replacement = _LATEX_REMNANTS.get(match.group(1))
        if replacement is None:
            return match.group(0)
        return f" {replacement} "

    text = _REMNANT_RE.sub(sub, text)
    text = text.replace("$", " ").replace(";", " ")
    text = text.strip()
    while text.endswith("."):
        text = text[:-1].rstrip()
    return text


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(Token(parsing.IFF, "<->", i))
            i += 3
            continue
        if text.startswith("->", i):
            tokens.append(Token(parsing.IMPLIES, "->", i))
            i += 2
            continue
        if text.startswith("<-", i):
            tokens.append(Token(parsing.IMPLIED_BY, "<-", i))
            i += 2
            continue
        if c == "&":
            tokens.append(Token(parsing.AND, c, i))
            i += 1
            continue
        if c == "|":
            tokens.append(Token(parsing.OR, c, i))
            i += 1
            continue
        if c == "-":
            tokens.append(Token(parsing.NOT, c, i))
            i += 1
            continue
        if c == "(":
            tokens.append(Token(parsing.LPAREN, c, i))
            i += 1
            continue
        if c == ")":
            tokens.append(Token(parsing.RPAREN, c, i))
            i += 1
            continue
        if c == ",":
            tokens.append(Token(parsing.COMMA, c, i))
            i += 1
            continue
        if c == "=":
            raise UnsupportedFeatureError("equality is not supported")
        m = _IDENT_TOKEN_RE.match(text, i)
        if m:
            word = m.group(0)
            if word == "all":
                tokens.append(Token(parsing.FORALL, word, i))
            elif word == "exists":
                tokens.append(Token(parsing.EXISTS, word, i))
            else:
                tokens.append(Token(parsing.IDENT, word, i))
            i = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(Token(parsing.EOF, "", n))
    return tokens


def parse_prover9_formula(text: str) -> Sentence:
    """Parse one (optionally ``.``-terminated) Prover9 clause after cleanup."""
    cleaned = cleanup(text)
    if not cleaned:
        raise EmptyInputError()
    formula = parsing.parse_tokens(_tokenize(cleaned))
    return Sentence(formula)
