"""Rubric definitions, score records, and judge-prompt rendering.

Three rubrics share the same mechanics: four 1-10 dimensions and an
unweighted derived mean. The multi-context framework scores spatial
orientation, social interaction, action & events, and ambience; the
navigational-assistance framework scores descriptiveness, objectivity,
accuracy, and clarity; the third is the generic four-dimension
accessibility rubric (descriptive / objective / accurate / clear).
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Dict, Tuple, Union

from ..errors import A11yBenchError


class TemplateMissingPlaceholder(A11yBenchError):
    pass


class Rubric(str, Enum):
    MCF = "mcf"
    NAF = "naf"
    A11Y = "a11y"

    @property
    def keys(self) -> Tuple[str, ...]:
        return _RUBRIC_KEYS[self]

    @property
    def score_name(self) -> str:
        return {Rubric.MCF: "mcf_score", Rubric.NAF: "naf_score", Rubric.A11Y: "mean_score"}[self]


_RUBRIC_KEYS: Dict[Rubric, Tuple[str, ...]] = {
    Rubric.MCF: ("spatial", "social", "action", "ambience"),
    Rubric.NAF: ("descriptiveness", "objectivity", "accuracy", "clarity"),
    Rubric.A11Y: ("descriptive", "objective", "accurate", "clear"),
}

# Table column labels for each dimension key.
DIMENSION_LABELS: Dict[str, str] = {
    "spatial": "Spatial Orientation",
    "social": "Social Interaction",
    "action": "Action & Event",
    "ambience": "Ambience",
    "descriptiveness": "Descriptiveness",
    "objectivity": "Objectivity",
    "accuracy": "Accuracy",
    "clarity": "Clarity",
    "descriptive": "Descriptive",
    "objective": "Objective",
    "accurate": "Accurate",
    "clear": "Clear",
}


class _FourDimScores:
    """Shared validation + derived mean for the four-dimension records."""

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{f.name} must be numeric, got {value!r}")
            if not 1.0 <= float(value) <= 10.0:
                raise ValueError(f"{f.name} = {value} outside [1, 10]")

    def dimension_values(self) -> Dict[str, float]:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}

    @property
    def mean(self) -> float:
        values = self.dimension_values()
        return sum(values.values()) / len(values)


@dataclass(frozen=True)
class MCFScores(_FourDimScores):
    spatial: float
    social: float
    action: float
    ambience: float

    @property
    def mcf_score(self) -> float:
        return self.mean


@dataclass(frozen=True)
class NAFScores(_FourDimScores):
    descriptiveness: float
    objectivity: float
    accuracy: float
    clarity: float

    @property
    def naf_score(self) -> float:
        return self.mean


@dataclass(frozen=True)
class A11yScores(_FourDimScores):
    descriptive: float
    objective: float
    accurate: float
    clear: float


ScoreRecord = Union[MCFScores, NAFScores, A11yScores]

SCORE_TYPES = {Rubric.MCF: MCFScores, Rubric.NAF: NAFScores, Rubric.A11Y: A11yScores}


@dataclass(frozen=True)
class JudgeRequest:
    rubric: Rubric
    candidate: str
    ground_truth: str
    video_id: str

    def __post_init__(self) -> None:
        if not self.candidate.strip() or not self.ground_truth.strip():
            raise ValueError("candidate and ground_truth must be non-empty")


_TEMPLATE_FILES = {
    Rubric.MCF: "judge_mcf.txt",
    Rubric.NAF: "judge_naf.txt",
    Rubric.A11Y: "judge_a11y.txt",
}


def default_rubric_template(rubric: Rubric) -> str:
    return (
        resources.files("a11ybench.data")
        .joinpath(_TEMPLATE_FILES[rubric])
        .read_text(encoding="utf-8")
    )


def load_rubric_template(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def build_judge_prompt(req: JudgeRequest, template: str | None = None) -> str:
    """Deterministic substitution of both description texts into the rubric.

    The rendered prompt instructs the judge to answer with strict JSON
    carrying the rubric's four keys, each in [1, 10].
    """
    if template is None:
        template = default_rubric_template(req.rubric)
    for placeholder in ("{candidate}", "{ground_truth}"):
        if placeholder not in template:
            raise TemplateMissingPlaceholder(
                f"rubric template lacks required placeholder {placeholder}"
            )
    return template.format(candidate=req.candidate, ground_truth=req.ground_truth)
