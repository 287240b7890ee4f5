"""Optional adapter around an external Prover9 binary."""
from __future__ import annotations

import math
import subprocess

from ..fol.prover9 import rename_reserved_predicates, render_prover9
from .typespace import Engine, ProverProblem, ProverVerdict, VerdictStatus

# Prover9 exit statuses (from its manual): 0 proof found, 2 sos empty
# (search exhausted), 4 max_seconds reached.
_EXIT_PROOF = 0
_EXIT_SOS_EMPTY = 2
_EXIT_MAX_SECONDS = 4


class ExternalProverError(Exception):
    pass


class SpawnError(ExternalProverError):
    pass


class ProverTimeoutError(ExternalProverError):
    pass


class UnparseableProverOutput(ExternalProverError):
    def __init__(self, output: str):
        self.output = output
        super().__init__("could not interpret prover output")


def render_problem(problem: ProverProblem, timeout: float = 10.0) -> str:
    """Prover9 input file text for an entailment problem."""
    renaming = rename_reserved_predicates(
        [*problem.premises, problem.conclusion])
    lines = [f"assign(max_seconds, {max(1, math.ceil(timeout))}).", ""]
    lines.append("formulas(assumptions).")
    for premise in problem.premises:
        lines.append(render_prover9(premise, renaming))
    lines.append("end_of_list.")
    lines.append("")
    lines.append("formulas(goals).")
    lines.append(render_prover9(problem.conclusion, renaming))
    lines.append("end_of_list.")
    return "\n".join(lines) + "\n"


def prove_external(problem: ProverProblem, binary_path: str,
                   timeout: float = 10.0) -> ProverVerdict:
    """Run the Prover9 binary on the problem.

    ENTAILED when the output reports a proof, NOT_ENTAILED when the search
    exhausted without one; no countermodel is produced by this engine.
    """
    text = render_problem(problem, timeout)
    try:
        result = subprocess.run(
            [binary_path],
            input=text,
            capture_output=True,
            text=True,
            timeout=timeout + 5.0,
        )
    except (FileNotFoundError, PermissionError, NotADirectoryError) as exc:
        raise SpawnError(f"cannot run prover binary {binary_path!r}: {exc}") from exc
    except subprocess.TimeoutExpired as exc:
        raise ProverTimeoutError(f"prover exceeded {timeout}s") from exc

    output = result.stdout + result.stderr
    if "THEOREM PROVED" in output or result.returncode == _EXIT_PROOF:
        return ProverVerdict(VerdictStatus.ENTAILED, None, Engine.EXTERNAL_PROVER9)
    if result.returncode == _EXIT_MAX_SECONDS or "max_seconds" in output.lower():
        raise ProverTimeoutError(f"prover gave up after max_seconds={timeout}")
    if "SEARCH FAILED" in output and (
            result.returncode == _EXIT_SOS_EMPTY or "sos_empty" in output
            or "sos empty" in output.lower()):
        return ProverVerdict(VerdictStatus.NOT_ENTAILED, None, Engine.EXTERNAL_PROVER9)
    raise UnparseableProverOutput(output)
