"""ROUGE-L: longest-common-subsequence F-measure with beta = 1.2."""

from __future__ import annotations

from ..errors import A11yBenchError
from .tokenizer import TokenizedText

BETA = 1.2


class EmptyInput(A11yBenchError):
    pass


def lcs_length(a, b) -> int:
    """Standard O(len(a) * len(b)) dynamic program."""
    a, b = list(a), list(b)
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rouge_l(candidate: TokenizedText, reference: TokenizedText) -> float:
    """F = (1 + b^2) P R / (R + b^2 P); the beta factor cancels when P = R."""
    if len(candidate) == 0 or len(reference) == 0:
        raise EmptyInput("candidate and reference must both be non-empty")
    lcs = lcs_length(candidate, reference)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    beta_sq = BETA * BETA
    return ((1.0 + beta_sq) * precision * recall) / (recall + beta_sq * precision)
