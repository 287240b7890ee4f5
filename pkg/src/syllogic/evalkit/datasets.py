"""JSON-lines dataset and prediction IO, plus report emission."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from ..pipeline import Prediction, Syllogism
from .metrics import MetricReport


class DatasetFormatError(Exception):
    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: {reason}")


_SYLLOGISM_FIELDS = {"id", "premises", "conclusion", "label_valid",
                     "label_plausible", "gold_relevant", "language"}


def _syllogism_from_dict(record: dict) -> Syllogism:
    unknown = record.keys() - _SYLLOGISM_FIELDS
    if unknown:
        raise ValueError(f"unknown fields: {sorted(unknown)}")
    if "id" not in record or "premises" not in record or "conclusion" not in record:
        raise ValueError("id, premises and conclusion are required")
    gold = record.get("gold_relevant")
    return Syllogism(
        id=str(record["id"]),
        premises=tuple(str(p) for p in record["premises"]),
        conclusion=str(record["conclusion"]),
        label_valid=record.get("label_valid"),
        label_plausible=record.get("label_plausible"),
        gold_relevant=None if gold is None else tuple(int(i) for i in gold),
        language=record.get("language", "en"),
    )


def _syllogism_to_dict(sample: Syllogism) -> dict:
    record: dict = {
        "id": sample.id,
        "premises": list(sample.premises),
        "conclusion": sample.conclusion,
    }
    if sample.label_valid is not None:
        record["label_valid"] = sample.label_valid
    if sample.label_plausible is not None:
        record["label_plausible"] = sample.label_plausible
    if sample.gold_relevant is not None:
        record["gold_relevant"] = list(sample.gold_relevant)
    if sample.language != "en":
        record["language"] = sample.language
    return record


def load_dataset(path) -> list[Syllogism]:
    """Load a JSON-lines dataset; format errors name the offending line."""
    samples: list[Syllogism] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("each line must hold a JSON object")
                sample = _syllogism_from_dict(record)
            except (ValueError, TypeError) as exc:
                raise DatasetFormatError(path, line_number, str(exc)) from exc
            if sample.id in seen_ids:
                raise DatasetFormatError(path, line_number,
                                         f"duplicate id {sample.id!r}")
            seen_ids.add(sample.id)
            samples.append(sample)
    return samples


def save_dataset(path, samples: Sequence[Syllogism]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for sample in samples:
            handle.write(json.dumps(_syllogism_to_dict(sample),
                                    ensure_ascii=False) + "\n")


def save_predictions(path, preds: Sequence[Prediction]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for pred in preds:
            record = {
                "id": pred.id,
                "valid": pred.valid,
                "relevant": list(pred.relevant),
                "diagnostics": pred.diagnostics,
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_predictions(path) -> list[Prediction]:
    preds: list[Prediction] = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                pred = Prediction(
                    id=str(record["id"]),
                    valid=bool(record["valid"]),
                    relevant=tuple(int(i) for i in record.get("relevant", [])),
                    diagnostics=record.get("diagnostics", {}),
                )
            except (ValueError, TypeError, KeyError) as exc:
                raise DatasetFormatError(path, line_number, str(exc)) from exc
            preds.append(pred)
    return preds


def emit_report(path, report: MetricReport, csv_path=None) -> None:
    """Write the metric report as one JSON document, optionally with a CSV."""
    Path(path).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n",
                          encoding="utf-8")
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["metric", "value", "ci_lo", "ci_hi"])
            rows = [
                ("accuracy", report.accuracy),
                ("premise_f1", report.premise_f1),
                ("c_intra", report.c_intra),
                ("c_inter", report.c_inter),
                ("content_effect", report.content_effect),
                ("combined_score", report.combined_score),
                ("combined_score_with_f1", report.combined_score_with_f1),
            ]
            for name, value in rows:
                if value is None:
                    continue
                lo, hi = report.ci.get(name, ("", ""))
                writer.writerow([name, f"{value:.6f}", lo, hi])
