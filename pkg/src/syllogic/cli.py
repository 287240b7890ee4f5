"""Command-line entry point.

Exit codes: 0 success, 1 fatal error, 2 partial failure (some samples
failed), 3 NOT ENTAILED (prove only), 64 usage error. Configuration
precedence: flags, then environment, then --config JSON file, then
defaults.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .evalkit.bootstrap import bootstrap_ci  # noqa: F401  (re-exported surface)
from .evalkit.datasets import (
    DatasetFormatError,
    emit_report,
    load_dataset,
    load_predictions,
    save_dataset,
    save_predictions,
)
from .evalkit.evaluate import DEFAULT_BOOTSTRAP, evaluate_predictions
from .evalkit.metrics import MetricError
from .evalkit.simulation import (
    UnbiasedModelSpec,
    ce_significance_threshold,
    cs_single_flip,
    expected_ce_closed_form,
    sensitivity_curve,
    simulate_unbiased_ce,
)
from .evalkit.synthesis import InsufficientPoolError, synthesize_subtask2
from .fol.ast import FolError
from .fol.latex import parse_latex_formula, render_latex
from .fol.prover9 import parse_prover9_formula, render_prover9
from .gateway.client import ChatClient, StubGateway
from .gateway.workflows import RetryPolicy
from .pipeline import (
    EngineChoice,
    PipelineConfig,
    Strategy,
    run_subtask,
)
from .prover.enumeration import decide_by_domain_enumeration
from .prover.external import ExternalProverError, prove_external
from .prover.normal import UnsupportedError
from .prover.typespace import ProverProblem, VerdictStatus, decide_entailment
from .aristotle import augment_existential_import

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2
EXIT_NOT_ENTAILED = 3
EXIT_USAGE = 64

PROVER9_PATH_ENV = "PROVER9_PATH"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fatal(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_FATAL


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _setting(flag, env_key: str | None, config: dict, config_key: str, default):
    if flag is not None:
        return flag
    if env_key and os.environ.get(env_key):
        return os.environ[env_key]
    if config_key in config:
        return config[config_key]
    return default


def _build_gateway(args, config: dict):
    if args.stub:
        return StubGateway.from_json(Path(args.stub).read_text(encoding="utf-8"))
    base_url = _setting(args.base_url, "LLM_BASE_URL", config, "base_url", None)
    if not base_url:
        raise ValueError("no LLM endpoint: pass --base-url, set LLM_BASE_URL, "
                         "or use --stub for offline fixtures")
    api_key = _setting(None, "LLM_API_KEY", config, "api_key", None)
    model = _setting(args.model, None, config, "model", "default")
    return ChatClient(base_url=base_url, api_key=api_key, model=model)


def _pipeline_config(args, config: dict) -> PipelineConfig:
    prover9_path = _setting(getattr(args, "prover9_path", None), PROVER9_PATH_ENV,
                            config, "prover9_path", None)
    return PipelineConfig(
        strategy=Strategy(args.strategy),
        translate_first=args.translate,
        augment_import=args.augment,
        engine=EngineChoice(args.engine),
        retry=RetryPolicy(max_attempts=args.retries,
                          retry_temperature=args.retry_temperature),
        worker_limit=args.workers,
        max_domain=args.max_domain,
        prover9_path=prover9_path,
    )


def cmd_run(args) -> int:
    try:
        config = _load_config(args.config)
        dataset = load_dataset(args.data)
        gateway = _build_gateway(args, config)
        cfg = _pipeline_config(args, config)
        predictions = run_subtask(dataset, args.subtask, cfg, gateway)
        save_predictions(args.out, predictions)
    except (OSError, ValueError, DatasetFormatError) as exc:
        return _fatal(str(exc))
    failed = sum(1 for p in predictions if p.diagnostics.get("failed"))
    print(f"wrote {len(predictions)} predictions to {args.out}"
          + (f" ({failed} failed samples)" if failed else ""))
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        preds = load_predictions(args.pred)
        gold = load_dataset(args.gold)
        report = evaluate_predictions(preds, gold, bootstrap=args.bootstrap,
                                      seed=args.seed)
        emit_report(args.out, report, csv_path=args.csv_out)
        if args.figures:
            from .figures import save_report_figure

            save_report_figure(report, Path(args.out).with_suffix(".png"))
    except (OSError, ValueError, MetricError, DatasetFormatError) as exc:
        return _fatal(str(exc))
    print(report.summary_line())
    return EXIT_OK


def cmd_prove(args) -> int:
    try:
        premises = [parse_latex_formula(text) for text in args.premises]
        conclusion = parse_latex_formula(args.conclusion)
        working = augment_existential_import(premises) if args.existential_import \
            else premises
        problem = ProverProblem(tuple(working), conclusion)
        if args.engine == "typespace":
            verdict = decide_entailment(problem)
        elif args.engine == "enumeration":
            verdict = decide_by_domain_enumeration(problem, args.max_domain)
        else:
            path = args.prover9_path or os.environ.get(PROVER9_PATH_ENV)
            if not path:
                return _fatal("external engine needs --prover9-path or PROVER9_PATH")
            verdict = prove_external(problem, path)
    except (FolError, UnsupportedError, ExternalProverError) as exc:
        return _fatal(str(exc))
    if verdict.status is VerdictStatus.ENTAILED:
        print("ENTAILED")
        return EXIT_OK
    print("NOT ENTAILED")
    if verdict.countermodel is not None:
        types = ["{" + ", ".join(sorted(t)) + "}" for t in verdict.countermodel.domain()]
        print("countermodel types: " + ", ".join(types))
    return EXIT_NOT_ENTAILED


def cmd_parse(args) -> int:
    try:
        if args.mode == "latex":
            sentence = parse_latex_formula(args.text)
        else:
            sentence = parse_prover9_formula(args.text)
        print(f"latex:   {render_latex(sentence)}")
        print(f"prover9: {render_prover9(sentence)}")
    except FolError as exc:
        return _fatal(str(exc))
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        grid = [float(a) for a in args.grid.split(",")] if args.grid else None
        rows: list[tuple[float, float, float]] = []
        if grid is None:
            rng = np.random.default_rng(args.seed)
            accuracies = rng.uniform(0.5, 1.0, size=args.trials)
            correct = rng.binomial(args.n_per_group, accuracies[:, None],
                                   size=(args.trials, 4))
            cells = 100.0 * correct / args.n_per_group
            measured_acc = cells.mean(axis=1)
            from .evalkit.simulation import _ce_from_cells

            ces = _ce_from_cells(cells)
            rows = list(zip(accuracies.tolist(), measured_acc.tolist(),
                            ces.tolist()))
        else:
            for i, a in enumerate(grid):
                spec = UnbiasedModelSpec(a, args.n_per_group, args.trials,
                                         args.seed + i)
                for acc, ce in simulate_unbiased_ce(spec):
                    rows.append((a, acc, ce))
        with open(args.out, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["a", "acc_measured", "ce"])
            for a, acc, ce in rows:
                writer.writerow([f"{a:.6f}", f"{acc:.6f}", f"{ce:.6f}"])
        if grid is not None and args.summary_out:
            with open(args.summary_out, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(["a", "trials", "mean_acc", "mean_ce", "expected_ce"])
                for a in grid:
                    sub = [(acc, ce) for g, acc, ce in rows if g == a]
                    mean_acc = sum(acc for acc, _ in sub) / len(sub)
                    mean_ce = sum(ce for _, ce in sub) / len(sub)
                    writer.writerow([f"{a:.6f}", len(sub), f"{mean_acc:.6f}",
                                     f"{mean_ce:.6f}",
                                     f"{expected_ce_closed_form(a, args.n_per_group):.6f}"])
        threshold = None
        if args.threshold_out:
            threshold_grid = grid or [round(a, 4) for a in
                                      np.linspace(0.5, 1.0, 26).tolist()]
            threshold = ce_significance_threshold(
                args.n_per_group, threshold_grid, args.trials, args.seed,
                quantile=args.quantile)
            with open(args.threshold_out, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(["a", "ce_threshold"])
                for a, value in threshold:
                    writer.writerow([f"{a:.6f}", f"{value:.6f}"])
        if args.figures:
            from .figures import save_simulation_figure

            save_simulation_figure(rows, Path(args.out).with_suffix(".png"),
                                   threshold=threshold)
    except (OSError, ValueError) as exc:
        return _fatal(str(exc))
    print(f"wrote {len(rows)} simulation rows to {args.out}")
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    try:
        accuracies = [float(a) for a in args.accuracies.split(",")]
        rows = sensitivity_curve(accuracies, ce_max=args.ce_max,
                                 ce_step=args.ce_step)
        with open(args.out, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["accuracy", "ce", "cs"])
            for accuracy, ce, cs in rows:
                writer.writerow([f"{accuracy:.6f}", f"{ce:.6f}", f"{cs:.6f}"])
        flips = []
        if args.n_total:
            totals = [int(n) for n in args.n_total.split(",")]
            flip_path = args.flip_out or str(Path(args.out).with_name(
                Path(args.out).stem + "_flip.csv"))
            with open(flip_path, "w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(["n_total", "cs_before", "cs_after", "drop"])
                for n_total in totals:
                    before, after, drop = cs_single_flip(n_total)
                    flips.append((n_total, before, after, drop))
                    writer.writerow([n_total, f"{before:.6f}", f"{after:.6f}",
                                     f"{drop:.6f}"])
        if args.figures:
            from .figures import save_sensitivity_figure

            save_sensitivity_figure(rows, Path(args.out).with_suffix(".png"),
                                    flips=flips or None)
    except (OSError, ValueError) as exc:
        return _fatal(str(exc))
    print(f"wrote sensitivity curves to {args.out}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    try:
        base = load_dataset(args.base)
        pool = load_dataset(args.pool)
        synthesized = synthesize_subtask2(base, pool,
                                          k_range=(args.k_min, args.k_max),
                                          seed=args.seed)
        save_dataset(args.out, synthesized)
    except (OSError, ValueError, DatasetFormatError, InsufficientPoolError,
            MetricError) as exc:
        return _fatal(str(exc))
    print(f"wrote {len(synthesized)} synthesized samples to {args.out}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="syllogic",
                     description="Syllogistic reasoning pipeline and metrics kit.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a subtask over a JSONL dataset",
                         parents=[], description="Run the pipeline.")
    run.add_argument("--subtask", type=int, choices=(1, 2, 3, 4), required=True)
    run.add_argument("--data", required=True, help="input dataset (JSON lines)")
    run.add_argument("--out", required=True, help="predictions output path")
    run.add_argument("--strategy", default="multistep",
                     choices=[s.value for s in Strategy])
    run.add_argument("--engine", default="typespace",
                     choices=[e.value for e in EngineChoice])
    run.add_argument("--translate", action=argparse.BooleanOptionalAction,
                     default=False, help="pre-translate non-English samples")
    run.add_argument("--augment", action=argparse.BooleanOptionalAction,
                     default=True, help="add existential-import premises")
    run.add_argument("--workers", type=int, default=4)
    run.add_argument("--retries", type=int, default=3)
    run.add_argument("--retry-temperature", type=float, default=0.6)
    run.add_argument("--max-domain", type=int, default=64)
    run.add_argument("--stub", help="offline stub fixtures (JSON)")
    run.add_argument("--model", help="model name for the chat endpoint")
    run.add_argument("--base-url", help="chat endpoint base URL")
    run.add_argument("--prover9-path", help="external prover binary")
    run.add_argument("--config", help="JSON config file")
    run.set_defaults(handler=cmd_run)

    ev = sub.add_parser("evaluate", help="score predictions against gold labels")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--gold", required=True)
    ev.add_argument("--bootstrap", type=int, default=DEFAULT_BOOTSTRAP)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--out", required=True, help="report JSON path")
    ev.add_argument("--csv-out", help="optional metrics CSV")
    ev.add_argument("--figures", action=argparse.BooleanOptionalAction,
                    default=False, help="render a PNG next to the report")
    ev.set_defaults(handler=cmd_evaluate)

    prove = sub.add_parser("prove", help="decide entailment for LaTeX formulas")
    prove.add_argument("--premises", nargs="*", default=[],
                       help="premise formulas in LaTeX notation")
    prove.add_argument("--conclusion", required=True)
    prove.add_argument("--import", dest="existential_import",
                       action=argparse.BooleanOptionalAction, default=False,
                       help="augment premises with existential import")
    prove.add_argument("--engine", default="typespace",
                       choices=("typespace", "enumeration", "external"))
    prove.add_argument("--max-domain", type=int, default=64)
    prove.add_argument("--prover9-path")
    prove.set_defaults(handler=cmd_prove)

    parse_cmd = sub.add_parser("parse", help="parse a formula and print renderings")
    parse_cmd.add_argument("--text", required=True)
    parse_cmd.add_argument("--mode", choices=("latex", "prover9"), default="latex")
    parse_cmd.set_defaults(handler=cmd_parse)

    sim = sub.add_parser("simulate", help="simulate unbiased-model content effect")
    sim.add_argument("--n-per-group", type=int, default=48)
    sim.add_argument("--trials", type=int, default=10000)
    sim.add_argument("--grid", help="comma-separated accuracies; default U(0.5,1)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="scatter CSV path")
    sim.add_argument("--summary-out", help="per-accuracy summary CSV (grid mode)")
    sim.add_argument("--threshold-out", help="CE significance threshold CSV")
    sim.add_argument("--quantile", type=float, default=0.95)
    sim.add_argument("--figures", action=argparse.BooleanOptionalAction,
                     default=True, help="render a PNG next to the CSV")
    sim.set_defaults(handler=cmd_simulate)

    sens = sub.add_parser("sensitivity", help="combined-score sensitivity curves")
    sens.add_argument("--accuracies", default="80,85,90,95,100")
    sens.add_argument("--ce-max", type=float, default=30.0)
    sens.add_argument("--ce-step", type=float, default=0.25)
    sens.add_argument("--n-total", help="comma-separated totals for single-flip rows")
    sens.add_argument("--flip-out", help="single-flip CSV (default <out>_flip.csv)")
    sens.add_argument("--out", required=True)
    sens.add_argument("--figures", action=argparse.BooleanOptionalAction,
                      default=True)
    sens.set_defaults(handler=cmd_sensitivity)

    syn = sub.add_parser("synthesize", help="build a relevance dataset from a pool")
    syn.add_argument("--base", required=True)
    syn.add_argument("--pool", required=True)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--k-min", type=int, default=3)
    syn.add_argument("--k-max", type=int, default=5)
    syn.add_argument("--out", required=True)
    syn.set_defaults(handler=cmd_synthesize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.handler(args)


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
