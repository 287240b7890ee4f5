"""Formula ASTs, the LaTeX-notation parser, and Prover9 serialization."""

from .ast import (
    AmbiguousScopeError,
    And,
    EmptyInputError,
    Exists,
    FolError,
    ForAll,
    Formula,
    FormulaSyntaxError,
    Iff,
    Implies,
    Not,
    Or,
    Predicate,
    PredicateMapping,
    Sentence,
    UnboundVariableError,
    UnsupportedFeatureError,
    Variable,
    collect_predicates,
    free_variables,
    predicate_arities,
    predicate_names,
)
from .latex import last_boxed, parse_latex_formula, render_latex
from .prover9 import (
    RESERVED_VARIABLE_NAMES,
    cleanup,
    parse_prover9_formula,
    rename_reserved_predicates,
    render_prover9,
)

__all__ = [
    "AmbiguousScopeError",
    "And",
    "EmptyInputError",
    "Exists",
    "FolError",
    "ForAll",
    "Formula",
    "FormulaSyntaxError",
    "Iff",
    "Implies",
    "Not",
    "Or",
    "Predicate",
    "PredicateMapping",
    "RESERVED_VARIABLE_NAMES",
    "Sentence",
    "UnboundVariableError",
    "UnsupportedFeatureError",
    "Variable",
    "cleanup",
    "collect_predicates",
    "free_variables",
    "last_boxed",
    "parse_latex_formula",
    "parse_prover9_formula",
    "predicate_arities",
    "predicate_names",
    "rename_reserved_predicates",
    "render_latex",
    "render_prover9",
]
