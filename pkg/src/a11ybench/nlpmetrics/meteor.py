"""METEOR with exact + Porter-stem unigram matching (no synonym resources).

The alignment maximizes the number of matched unigrams and, among maximal
matchings, minimizes the number of chunks (maximal runs of matches that are
contiguous and in order on both sides). Exact token equality implies stem
equality, so pair eligibility reduces to shared stem classes; the chunk
minimization runs as branch-and-bound seeded with a greedy solution and
falls back to that solution if the node budget is exhausted (unreachable at
caption lengths).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Dict, List, Tuple

from ..errors import A11yBenchError
from .porter import porter_stem
from .rouge import EmptyInput
from .tokenizer import TokenizedText

NODE_BUDGET = 250_000


class _Budget:
    def __init__(self, limit: int):
        self.remaining = limit

    def spend(self) -> bool:
        self.remaining -= 1
        return self.remaining >= 0


def _stem_classes(cand: List[str], ref: List[str]):
    stems_c = [porter_stem(t) for t in cand]
    stems_r = [porter_stem(t) for t in ref]
    shared = set(stems_c) & set(stems_r)
    cls_c = [s if s in shared else None for s in stems_c]
    cls_r = [s if s in shared else None for s in stems_r]
    return cls_c, cls_r


def _greedy_alignment(cls_c, cls_r, needed: Dict[str, int]) -> Tuple[int, int]:
    """Valid maximum-cardinality alignment; chunk count is an upper bound."""
    n_ref = len(cls_r)
    class_refs = defaultdict(list)
    for j, cls in enumerate(cls_r):
        if cls is not None:
            class_refs[cls].append(j)
    used_ref = [False] * n_ref
    used_count: Dict[str, int] = defaultdict(int)
    matched = chunks = 0
    last_i = last_j = -2
    for i, cls in enumerate(cls_c):
        if cls is None or used_count[cls] >= needed.get(cls, 0):
            continue
        cont = last_j + 1
        if last_i == i - 1 and 0 <= cont < n_ref and not used_ref[cont] and cls_r[cont] == cls:
            j = cont
        else:
            after = [r for r in class_refs[cls] if not used_ref[r] and r > last_j]
            anywhere = [r for r in class_refs[cls] if not used_ref[r]]
            j = after[0] if after else anywhere[0]
        if not (last_i == i - 1 and j == last_j + 1):
            chunks += 1
        used_ref[j] = True
        used_count[cls] += 1
        matched += 1
        last_i, last_j = i, j
    return matched, chunks


def meteor_alignment(candidate: TokenizedText, reference: TokenizedText) -> Tuple[int, int]:
    """Return (matches, chunks) for the optimal alignment."""
    cand, ref = list(candidate), list(reference)
    cls_c, cls_r = _stem_classes(cand, ref)
    count_c = Counter(c for c in cls_c if c is not None)
    count_r = Counter(c for c in cls_r if c is not None)
    needed = {cls: min(count_c[cls], count_r[cls]) for cls in count_c}
    m = sum(needed.values())
    if m == 0:
        return 0, 0

    greedy_m, greedy_chunks = _greedy_alignment(cls_c, cls_r, needed)
    assert greedy_m == m, "greedy alignment must reach maximum cardinality"

    n_cand, n_ref = len(cls_c), len(cls_r)
    # suffix[i][cls]: candidate positions of class cls at index >= i.
    suffix: List[Dict[str, int]] = [dict() for _ in range(n_cand + 1)]
    for i in range(n_cand - 1, -1, -1):
        suffix[i] = dict(suffix[i + 1])
        cls = cls_c[i]
        if cls is not None:
            suffix[i][cls] = suffix[i].get(cls, 0) + 1

    class_refs = defaultdict(list)
    for j, cls in enumerate(cls_r):
        if cls is not None:
            class_refs[cls].append(j)
    avail: Dict[str, int] = {cls: len(class_refs[cls]) for cls in class_refs}
    used_ref = [False] * n_ref
    best = greedy_chunks
    budget = _Budget(NODE_BUDGET)

    def bound(i: int) -> int:
        total = 0
        for cls, cnt in suffix[i].items():
            total += min(cnt, avail.get(cls, 0))
        return total

    def dfs(i: int, matched: int, chunks: int, last_i: int, last_j: int) -> None:
        nonlocal best
        if chunks >= best or not budget.spend():
            return
        if matched + bound(i) < m:
            return
        if matched == m:
            best = chunks  # chunks < best guaranteed above
            return
        assert i < n_cand
        cls = cls_c[i]
        if cls is not None and avail.get(cls, 0) > 0:
            cont = last_j + 1
            candidates_j = class_refs[cls]
            cont_valid = (
                last_i == i - 1
                and 0 <= cont < n_ref
                and not used_ref[cont]
                and cls_r[cont] == cls
            )
            ordered = [cont] if cont_valid else []
            ordered.extend(
                j for j in candidates_j
                if not used_ref[j] and not (cont_valid and j == cont)
            )
            for j in ordered:
                extend = last_i == i - 1 and j == last_j + 1
                used_ref[j] = True
                avail[cls] -= 1
                dfs(i + 1, matched + 1, chunks + (0 if extend else 1), i, j)
                avail[cls] += 1
                used_ref[j] = False
        dfs(i + 1, matched, chunks, last_i, last_j)

    dfs(0, 0, 0, -2, -2)
    return m, best


def meteor(candidate: TokenizedText, reference: TokenizedText) -> float:
    """F_mean = 10PR / (R + 9P) with a 0.5 (chunks/m)^3 fragmentation penalty."""
    if len(candidate) == 0 or len(reference) == 0:
        raise EmptyInput("candidate and reference must both be non-empty")
    m, chunks = meteor_alignment(candidate, reference)
    if m == 0:
        return 0.0
    precision = m / len(candidate)
    recall = m / len(reference)
    f_mean = 10.0 * precision * recall / (recall + 9.0 * precision)
    penalty = 0.5 * (chunks / m) ** 3
    return f_mean * (1.0 - penalty)
