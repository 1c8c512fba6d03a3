"""The four prompting strategies and their deterministic rendering.

A strategy combines a base prompt with an optional context block (the
dataset's human annotations under a literal "Current Description:" header)
and an optional numbered audio-description guideline list. Rendering is a
pure function of its inputs: no timestamps, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import List, Optional

from .errors import A11yBenchError, MissingFile
from .keyframes.extract import KeyframeSet
from .manifest import VideoEntry

CONTEXT_HEADER = "Current Description:"
GUIDELINES_HEADER = "Follow these audio description guidelines:"

DEFAULT_SYSTEM_TEXT = (
    "You are an expert audio describer writing video descriptions "
    "for blind and low-vision viewers."
)


class MissingContext(A11yBenchError):
    pass


class EmptyGuidelines(A11yBenchError):
    pass


class EmptyFile(A11yBenchError):
    pass


class PromptStrategy(str, Enum):
    PROMPT_ONLY = "prompt_only"
    PROMPT_CONTEXT = "prompt_context"
    PROMPT_CONTEXT_AD = "prompt_context_ad"
    PROMPT_AD = "prompt_ad"

    @property
    def wants_context(self) -> bool:
        return self in (PromptStrategy.PROMPT_CONTEXT, PromptStrategy.PROMPT_CONTEXT_AD)

    @property
    def wants_guidelines(self) -> bool:
        return self in (PromptStrategy.PROMPT_CONTEXT_AD, PromptStrategy.PROMPT_AD)

    @property
    def label(self) -> str:
        return _STRATEGY_LABELS[self]


_STRATEGY_LABELS = {
    PromptStrategy.PROMPT_ONLY: "Prompt Only",
    PromptStrategy.PROMPT_CONTEXT: "Prompt + Context",
    PromptStrategy.PROMPT_CONTEXT_AD: "Prompt + Context + AD Guidelines",
    PromptStrategy.PROMPT_AD: "Prompt + AD Guidelines",
}


@dataclass(frozen=True)
class GuidelineSet:
    items: tuple
    source_label: str

    def __post_init__(self) -> None:
        if any(not item for item in self.items):
            raise ValueError("guideline items must be non-empty")

    def __len__(self) -> int:
        return len(self.items)

    def numbered(self) -> str:
        return "\n".join(f"{i}. {g}" for i, g in enumerate(self.items, start=1))


@dataclass(frozen=True)
class PromptBundle:
    video_id: str
    strategy: PromptStrategy
    system_text: str
    user_text: str
    image_count: int

    def __post_init__(self) -> None:
        if not self.user_text:
            raise ValueError("user_text must be non-empty")
        if self.image_count < 1:
            raise ValueError("image_count must be >= 1")


def load_guidelines(path: str | Path) -> GuidelineSet:
    """Ordered, trimmed, non-empty lines of the file become guideline items."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"guideline file not found: {path}")
    items = tuple(
        line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()
    )
    if not items:
        raise EmptyFile(f"guideline file is empty: {path}")
    return GuidelineSet(items=items, source_label=path.name)


def _read_data(name: str) -> str:
    return resources.files("a11ybench.data").joinpath(name).read_text(encoding="utf-8")


def default_guidelines() -> GuidelineSet:
    """The bundled 42-item audio-description guideline set."""
    items = tuple(line.strip() for line in _read_data("ad_guidelines.txt").splitlines() if line.strip())
    assert len(items) == 42, f"bundled guideline set must have 42 items, found {len(items)}"
    return GuidelineSet(items=items, source_label="bundled-default")


def default_base_prompt() -> str:
    return _read_data("base_prompt.txt").strip()


def default_template() -> str:
    return _read_data("prompt_template.txt")


def build_prompt(
    entry: VideoEntry,
    strategy: PromptStrategy,
    guidelines: Optional[GuidelineSet],
    base_prompt: str,
    keyframes: KeyframeSet,
    template: Optional[str] = None,
    system_text: str = DEFAULT_SYSTEM_TEXT,
) -> PromptBundle:
    """Render one (video, strategy) pair into a ready-to-send prompt.

    The context block, when present, sits before the guideline block, so the
    context-and-guidelines rendering differs from the guidelines-only one by
    exactly one contiguous insertion.
    """
    if not keyframes.selected:
        raise ValueError("keyframes must be non-empty")

    context_block = ""
    if strategy.wants_context:
        annotations = [a for a in entry.human_annotations if a.strip()]
        if not annotations:
            raise MissingContext(
                f"strategy {strategy.value} requires human annotations; "
                f"entry {entry.id!r} has none"
            )
        context_block = CONTEXT_HEADER + "\n" + "\n".join(annotations) + "\n\n"

    guidelines_block = ""
    if strategy.wants_guidelines:
        if guidelines is None or len(guidelines) == 0:
            raise EmptyGuidelines(
                f"strategy {strategy.value} requires a non-empty guideline set"
            )
        guidelines_block = GUIDELINES_HEADER + "\n" + guidelines.numbered() + "\n"

    template = template if template is not None else default_template()
    user_text = template.format(
        base_prompt=base_prompt,
        context_block=context_block,
        guidelines_block=guidelines_block,
    ).rstrip() + "\n"

    return PromptBundle(
        video_id=entry.id,
        strategy=strategy,
        system_text=system_text,
        user_text=user_text,
        image_count=len(keyframes.selected),
    )


def parse_strategies(names: List[str]) -> List[PromptStrategy]:
    """Map CLI strategy names to enum members, preserving order."""
    out = []
    for name in names:
        try:
            out.append(PromptStrategy(name))
        except ValueError:
            valid = ", ".join(s.value for s in PromptStrategy)
            raise ValueError(f"unknown strategy {name!r}; valid: {valid}") from None
    return out
