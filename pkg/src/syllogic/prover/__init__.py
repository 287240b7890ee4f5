"""Entailment engines for the monadic fragment and the external adapter."""

from .enumeration import compile_sentence, decide_by_domain_enumeration, holds
from .external import (
    ExternalProverError,
    ProverTimeoutError,
    SpawnError,
    UnparseableProverOutput,
    prove_external,
    render_problem,
)
from .normal import (
    BoolCombo,
    Existential,
    NormalSentence,
    Universal,
    UnsupportedError,
    normalize,
)
from .typespace import (
    Engine,
    Model,
    ProverProblem,
    ProverVerdict,
    VerdictStatus,
    all_profiles,
    check_satisfiable,
    decide_entailment,
    eval_matrix,
)

__all__ = [
    "BoolCombo",
    "Engine",
    "Existential",
    "ExternalProverError",
    "Model",
    "NormalSentence",
    "ProverProblem",
    "ProverTimeoutError",
    "ProverVerdict",
    "SpawnError",
    "Universal",
    "UnparseableProverOutput",
    "UnsupportedError",
    "VerdictStatus",
    "all_profiles",
    "check_satisfiable",
    "compile_sentence",
    "decide_by_domain_enumeration",
    "decide_entailment",
    "eval_matrix",
    "holds",
    "normalize",
    "prove_external",
    "render_problem",
]
