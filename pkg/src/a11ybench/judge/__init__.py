"""LLM-as-judge scoring: rubric prompts, strict-JSON parsing, aggregation."""

from .rubrics import (
    A11yScores,
    JudgeRequest,
    MCFScores,
    NAFScores,
    Rubric,
    TemplateMissingPlaceholder,
    build_judge_prompt,
    default_rubric_template,
)
from .parsing import (
    MissingKey,
    NoJsonFound,
    NonNumeric,
    OutOfRange,
    ParseFailure,
    parse_scores,
)
from .runner import (
    EmptyGroup,
    JudgeOutcome,
    JudgeUnparseable,
    JudgedRecord,
    aggregate_framework,
    judge_one,
)

__all__ = [
    "A11yScores",
    "JudgeRequest",
    "MCFScores",
    "NAFScores",
    "Rubric",
    "TemplateMissingPlaceholder",
    "build_judge_prompt",
    "default_rubric_template",
    "MissingKey",
    "NoJsonFound",
    "NonNumeric",
    "OutOfRange",
    "ParseFailure",
    "parse_scores",
    "EmptyGroup",
    "JudgeOutcome",
    "JudgeUnparseable",
    "JudgedRecord",
    "aggregate_framework",
    "judge_one",
]
