"""Extraction of structured payloads from free-form model output."""
from __future__ import annotations

import json
from typing import Any

from ..fol.latex import last_boxed


class ExtractionError(Exception):
    pass


class NoBoxedContentError(ExtractionError):
    def __init__(self):
        super().__init__("no \\boxed{...} group in the response")


class NoJsonFoundError(ExtractionError):
    def __init__(self):
        super().__init__("no JSON object or array in the response")


class SchemaMismatchError(ExtractionError):
    def __init__(self, expected: str):
        self.expected = expected
        super().__init__(f"response does not match the expected schema: {expected}")


class NotABooleanError(ExtractionError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"expected a boolean, got {token!r}")


class IndexOutOfRangeError(ExtractionError):
    def __init__(self, index: int, count: int):
        self.index = index
        self.count = count
        super().__init__(f"premise index {index} out of range for {count} premises")


def extract_boxed(text: str) -> str:
    """Content of the last balanced ``\\boxed{...}`` group."""
    content = last_boxed(text)
    if content is None:
        raise NoBoxedContentError()
    return content


def extract_json_object(text: str) -> Any:
    """The last top-level JSON object or array in the text.

    Candidates are scanned left to right and decoded non-overlapping, so a
    nested object inside a larger one does not shadow its container; fenced
    code blocks need no special casing because the decoder is anchored at
    each ``{``/``[``.
    """
    decoder = json.JSONDecoder()
    found: Any = None
    have = False
    i = 0
    while i < len(text):
        if text[i] in "{[":
            try:
                value, end = decoder.raw_decode(text, i)
            except json.JSONDecodeError:
                i += 1
                continue
            found = value
            have = True
            i = end
        else:
            i += 1
    if not have:
        raise NoJsonFoundError()
    return found


def parse_json_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.strip().lower() in ("true", "false"):
        return value.strip().lower() == "true"
    raise SchemaMismatchError("'valid' must be a JSON bool or 'true'/'false'")
