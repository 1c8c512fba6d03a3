"""Judge execution against a local backend, with corrective retries, and
per-group aggregation of parsed scores."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import A11yBenchError
from ..inference.client import BackendClient, BackendConfig
from .parsing import ParseFailure, parse_scores
from .rubrics import JudgeRequest, Rubric, ScoreRecord, build_judge_prompt

JUDGE_SYSTEM_TEXT = (
    "You are a strict evaluator. Score the candidate against the reference "
    "and answer with only the requested JSON object."
)

CORRECTIVE_SUFFIX = (
    "\n\nYour previous reply could not be parsed. "
    "Return only the JSON object with the four required keys and no other text."
)


class JudgeUnparseable(A11yBenchError):
    """All attempts failed to parse; carries every raw transcript."""

    def __init__(self, video_id: str, raw_attempts: List[str]):
        super().__init__(
            f"judge output unparseable for {video_id!r} after {len(raw_attempts)} attempts"
        )
        self.raw_attempts = raw_attempts


class EmptyGroup(A11yBenchError):
    pass


@dataclass
class _JudgePrompt:
    system_text: str
    user_text: str
    video_id: str
    strategy: Optional[str] = None


@dataclass
class JudgeOutcome:
    video_id: str
    rubric: Rubric
    scores: ScoreRecord
    attempts: int
    raw_attempts: List[str] = field(default_factory=list)


def judge_one(
    req: JudgeRequest,
    cfg: BackendConfig,
    retries: int = 2,
    template: Optional[str] = None,
    client: Optional[BackendClient] = None,
) -> JudgeOutcome:
    """Ask the judge; on parse failure re-ask with a corrective suffix.

    Backend errors pass through untouched; only parse failures trigger the
    corrective retry loop.
    """
    client = client or BackendClient(cfg)
    base_prompt = build_judge_prompt(req, template)
    raw_attempts: List[str] = []
    for attempt in range(retries + 1):
        user_text = base_prompt if attempt == 0 else base_prompt + CORRECTIVE_SUFFIX
        result = client.generate(
            _JudgePrompt(system_text=JUDGE_SYSTEM_TEXT, user_text=user_text,
                         video_id=req.video_id),
            images=[],
        )
        raw_attempts.append(result.text)
        try:
            scores = parse_scores(result.text, req.rubric)
        except ParseFailure:
            continue
        return JudgeOutcome(
            video_id=req.video_id,
            rubric=req.rubric,
            scores=scores,
            attempts=attempt + 1,
            raw_attempts=raw_attempts,
        )
    raise JudgeUnparseable(req.video_id, raw_attempts)


@dataclass(frozen=True)
class JudgedRecord:
    """One judged video in aggregation-ready form."""

    video_id: str
    model_label: str
    environment: str
    rubric: Rubric
    scores: ScoreRecord


def aggregate_framework(
    records: Iterable[JudgedRecord],
) -> Dict[Tuple[str, str], Dict[str, float]]:
    """Arithmetic dimension means per (environment, model_label) group.

    The derived framework score of each group is the mean of its four
    dimension means; aggregation is permutation-invariant.
    """
    records = list(records)
    if not records:
        raise EmptyGroup("no judged records to aggregate")
    rubrics = {r.rubric for r in records}
    if len(rubrics) != 1:
        raise ValueError(f"cannot aggregate across rubrics: {sorted(r.value for r in rubrics)}")
    rubric = rubrics.pop()

    groups: Dict[Tuple[str, str], List[JudgedRecord]] = {}
    for record in records:
        groups.setdefault((record.environment, record.model_label), []).append(record)

    out: Dict[Tuple[str, str], Dict[str, float]] = {}
    for key, members in sorted(groups.items()):
        dims: Dict[str, float] = {}
        for dim in rubric.keys:
            dims[dim] = sum(m.scores.dimension_values()[dim] for m in members) / len(members)
        dims[rubric.score_name] = sum(dims[d] for d in rubric.keys) / len(rubric.keys)
        out[key] = dims
    return out
