"""Self-contained caption metrics on a 0-1 scale: BLEU-1/4, ROUGE-L, METEOR, CIDEr."""

from .tokenizer import TokenizedText, tokenize
from .bleu import EmptyReference, bleu_n
from .rouge import EmptyInput, rouge_l
from .meteor import meteor, meteor_alignment
from .cider import CorpusStats, CorpusTooSmall, StatsMismatch, build_corpus_stats, cider
from .scoring import MetricReport, MissingGroundTruth, score_dataset, group_means

__all__ = [
    "TokenizedText",
    "tokenize",
    "EmptyReference",
    "bleu_n",
    "EmptyInput",
    "rouge_l",
    "meteor",
    "meteor_alignment",
    "CorpusStats",
    "CorpusTooSmall",
    "StatsMismatch",
    "build_corpus_stats",
    "cider",
    "MetricReport",
    "MissingGroundTruth",
    "score_dataset",
    "group_means",
]
