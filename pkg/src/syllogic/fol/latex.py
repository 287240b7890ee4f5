r"""LaTeX-notation first-order logic: parsing and canonical rendering.

The accepted operator commands are \forall, \exists, \land, \lor, \neg,
\rightarrow and \leftrightarrow, plus the aliases \wedge, \vee, \lnot, \to
and \Rightarrow. Input may be wrapped in ``\boxed{...}`` groups, ``$...$``
math delimiters and whitespace; wrappers are stripped before parsing and
the LAST boxed group wins (reasoning models emit intermediate candidates).
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
)
from .parsing import Token

_COMMAND_KINDS = {
    "forall": parsing.FORALL,
    "exists": parsing.EXISTS,
    "land": parsing.AND,
    "wedge": parsing.AND,
    "lor": parsing.OR,
    "vee": parsing.OR,
    "neg": parsing.NOT,
    "lnot": parsing.NOT,
    "rightarrow": parsing.IMPLIES,
    "to": parsing.IMPLIES,
    "Rightarrow": parsing.IMPLIES,
    "leftrightarrow": parsing.IFF,
}

_IDENT_TOKEN_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


def last_boxed(text: str) -> str | None:
    """Content of the last balanced ``\\boxed{...}`` group, or None."""
    marker = r"\boxed{"
    content = None
    start = text.find(marker)
    while start != -1:
        depth = 1
        i = start + len(marker)
        while i < len(text) and depth:
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
            i += 1
        if depth:
            break  # unbalanced; ignore this and any later marker
        content = text[start + len(marker):i - 1]
        start = text.find(marker, i)
    return content


def strip_wrappers(text: str) -> str:
    boxed = last_boxed(text)
    if boxed is not None:
        text = boxed
    text = text.strip()
    while text.startswith("$") and text.endswith("$") and len(text) > 1:
        text = text[1:-1].strip()
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
        if c == "\\":
            m = _IDENT_TOKEN_RE.match(text, i + 1)
            if not m:
                raise FormulaSyntaxError("stray backslash", i)
            name = m.group(0)
            kind = _COMMAND_KINDS.get(name)
            if kind is None:
                raise FormulaSyntaxError(f"unknown LaTeX command \\{name}", i)
            tokens.append(Token(kind, "\\" + name, i))
            i = m.end()
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
            tokens.append(Token(parsing.IDENT, m.group(0), i))
            i = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    tokens.append(Token(parsing.EOF, "", n))
    return tokens


def parse_latex_formula(text: str) -> Sentence:
    """Parse LaTeX-notation FOL into a closed Sentence.

    Raises FormulaSyntaxError (with position and expected tokens),
    UnboundVariableError for free variables, EmptyInputError for blank
    input, and UnsupportedFeatureError for equality or function terms.
    """
    stripped = strip_wrappers(text)
    if not stripped:
        raise EmptyInputError()
    formula = parsing.parse_tokens(_tokenize(stripped))
    return Sentence(formula)


def render_latex(sentence: Sentence) -> str:
    """Canonical, fully parenthesized LaTeX rendering.

    ``parse_latex_formula(render_latex(s))`` is structurally equal to ``s``.
    """
    return _render(sentence.formula)


def _render(f: Formula) -> str:
    if isinstance(f, Predicate):
        return f"{f.name}({', '.join(v.name for v in f.args)})"
    if isinstance(f, Not):
        return "\\neg " + _render(f.inner)
    if isinstance(f, And):
        return f"({_render(f.left)} \\land {_render(f.right)})"
    if isinstance(f, Or):
        return f"({_render(f.left)} \\lor {_render(f.right)})"
    if isinstance(f, Implies):
        return f"({_render(f.left)} \\rightarrow {_render(f.right)})"
    if isinstance(f, Iff):
        return f"({_render(f.left)} \\leftrightarrow {_render(f.right)})"
    if isinstance(f, (ForAll, Exists)):
        command = "\\forall" if isinstance(f, ForAll) else "\\exists"
        body = _render(f.body)
        if not _self_delimited(f.body, body):
            body = f"({body})"
        return f"{command} {f.var.name} {body}"
    raise TypeError(f"not a formula: {f!r}")


def _self_delimited(f: Formula, rendered: str) -> bool:
    # binary renderings carry their own outer parentheses
    return rendered.startswith("(") and isinstance(f, (And, Or, Implies, Iff))
