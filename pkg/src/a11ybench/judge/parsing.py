"""Robust extraction of rubric scores from raw judge output.

Judges chat; we take the first parseable JSON object in the reply and
validate it against the rubric. Every failure mode maps to a typed error,
so arbitrary bytes can never crash the pipeline.
"""

from __future__ import annotations

import json
from typing import Any, Dict

from ..errors import A11yBenchError
from .rubrics import Rubric, SCORE_TYPES, ScoreRecord


class ParseFailure(A11yBenchError):
    """Base class for judge-output parse errors."""


class NoJsonFound(ParseFailure):
    pass


class MissingKey(ParseFailure):
    def __init__(self, key: str):
        super().__init__(f"judge JSON lacks required key {key!r}")
        self.key = key


class NonNumeric(ParseFailure):
    def __init__(self, key: str, value: Any):
        super().__init__(f"judge value for {key!r} is not numeric: {value!r}")
        self.key = key
        self.value = value


class OutOfRange(ParseFailure):
    def __init__(self, key: str, value: float):
        super().__init__(f"judge value for {key!r} out of [1, 10]: {value}")
        self.key = key
        self.value = value


def first_json_object(raw: str) -> Dict[str, Any]:
    """First decodable JSON object in the string, chatter tolerated."""
    decoder = json.JSONDecoder()
    start = raw.find("{")
    while start != -1:
        try:
            obj, _ = decoder.raw_decode(raw, start)
        except (json.JSONDecodeError, ValueError):
            start = raw.find("{", start + 1)
            continue
        if isinstance(obj, dict):
            return obj
        start = raw.find("{", start + 1)
    raise NoJsonFound("no JSON object found in judge output")


def parse_scores(raw: str, rubric: Rubric) -> ScoreRecord:
    """Validate the four rubric keys and build the typed score record."""
    obj = first_json_object(raw)
    values: Dict[str, float] = {}
    for key in rubric.keys:
        if key not in obj:
            raise MissingKey(key)
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise NonNumeric(key, value)
        value = float(value)
        if value != value or value in (float("inf"), float("-inf")):
            raise NonNumeric(key, value)
        if not 1.0 <= value <= 10.0:
            raise OutOfRange(key, value)
        values[key] = value
    return SCORE_TYPES[rubric](**values)
