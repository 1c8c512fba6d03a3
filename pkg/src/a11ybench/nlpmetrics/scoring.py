"""Dataset-level scoring: per-video metric reports and grouped means.

Groups follow the result tables' layout: one mean row per
(strategy, environment) pair. CIDEr statistics are built per strategy batch
over that batch's reference descriptions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, asdict
from typing import Dict, Iterable, List, Mapping, Tuple

from ..errors import A11yBenchError
from ..manifest import DatasetManifest
from .bleu import bleu_n
from .cider import build_corpus_stats, cider
from .meteor import meteor
from .rouge import rouge_l
from .tokenizer import TokenizedText, tokenize

METRIC_NAMES = ("bleu1", "bleu4", "meteor", "rouge_l", "cider")


class MissingGroundTruth(A11yBenchError):
    def __init__(self, video_ids: List[str]):
        super().__init__(f"entries lack ground_truth: {sorted(video_ids)}")
        self.video_ids = sorted(video_ids)


@dataclass(frozen=True)
class MetricReport:
    bleu1: float
    bleu4: float
    meteor: float
    rouge_l: float
    cider: float

    def __post_init__(self) -> None:
        for name, value in self.as_dict().items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} = {value} outside [0, 1]")

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def _pair_metrics(cand: TokenizedText, ref: TokenizedText) -> Dict[str, float]:
    """BLEU/ROUGE/METEOR for one candidate; an empty candidate scores zero."""
    if len(cand) == 0:
        return {"bleu1": 0.0, "bleu4": 0.0, "meteor": 0.0, "rouge_l": 0.0}
    return {
        "bleu1": bleu_n(cand, ref, 1),
        "bleu4": bleu_n(cand, ref, 4),
        "meteor": meteor(cand, ref),
        "rouge_l": rouge_l(cand, ref),
    }


def score_dataset(
    results: Iterable,
    manifest: DatasetManifest,
) -> Tuple[Dict[Tuple[str, str], MetricReport], Dict[Tuple[str, str], Dict[str, float]]]:
    """Score generation results against the manifest's ground truth.

    ``results`` items need ``video_id``, ``strategy`` and ``text`` attributes
    (GenerationResults or rehydrated records). Returns per-(video, strategy)
    reports keyed by (video_id, strategy) and per-(strategy, environment)
    arithmetic means.
    """
    results = list(results)
    missing = {
        r.video_id for r in results if not manifest.by_id(r.video_id).ground_truth
    }
    if missing:
        raise MissingGroundTruth(sorted(missing))

    by_strategy: Dict[str, List] = defaultdict(list)
    for r in results:
        by_strategy[r.strategy].append(r)

    per_video: Dict[Tuple[str, str], MetricReport] = {}
    for strategy, batch in by_strategy.items():
        cands = [tokenize(r.text) for r in batch]
        refs = [tokenize(manifest.by_id(r.video_id).ground_truth) for r in batch]
        stats = build_corpus_stats(refs)
        cider_scores, _ = cider(cands, refs, stats)
        for r, cand, ref, cid in zip(batch, cands, refs, cider_scores):
            base = _pair_metrics(cand, ref)
            per_video[(r.video_id, strategy)] = MetricReport(cider=cid, **base)

    env_of = {e.id: e.environment.value for e in manifest.entries}
    grouped: Dict[Tuple[str, str], List[MetricReport]] = defaultdict(list)
    for (video_id, strategy), report in per_video.items():
        grouped[(strategy, env_of[video_id])].append(report)
    means = {key: group_means(reports) for key, reports in grouped.items()}
    return per_video, means


def group_means(reports: List[MetricReport]) -> Dict[str, float]:
    """Arithmetic mean per metric; indoor and outdoor never share a row."""
    if not reports:
        raise ValueError("cannot average an empty group")
    return {
        name: sum(r.as_dict()[name] for r in reports) / len(reports)
        for name in METRIC_NAMES
    }


def mean_of(values: Mapping[str, float]) -> float:
    return sum(values.values()) / len(values)
