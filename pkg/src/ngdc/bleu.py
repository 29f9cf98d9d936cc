"""Corpus-level BLEU (Papineni et al. 2002) on a 0-100 scale."""

from __future__ import annotations

import enum
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


class Smoothing(str, enum.Enum):
    NONE = "none"
    # Lin & Och: +1 on matches and totals for n >= 2
    ADD_ONE = "add-one"


@dataclass(frozen=True)
class SentencePair:
    hypothesis: tuple[str, ...]
    references: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        hyp = tuple(self.hypothesis)
        refs = tuple(tuple(r) for r in self.references)
        if not refs:
            raise ValueError("a sentence pair needs at least one reference")
        for tok in hyp + tuple(t for r in refs for t in r):
            if not isinstance(tok, str) or not tok:
                raise ValueError(f"tokens must be non-empty strings, got {tok!r}")
        object.__setattr__(self, "hypothesis", hyp)
        object.__setattr__(self, "references", refs)


@dataclass(frozen=True)
class BleuReport:
    precisions: tuple[float, ...]
    matches: tuple[int, ...]
    totals: tuple[int, ...]
    brevity_penalty: float
    score: float
    hyp_length: int
    ref_length: int
    smoothing: Smoothing = Smoothing.NONE

    def as_dict(self) -> dict:
        return {
            "score": self.score,
            "precisions": list(self.precisions),
            "matches": list(self.matches),
            "totals": list(self.totals),
            "brevity_penalty": self.brevity_penalty,
            "hyp_length": self.hyp_length,
            "ref_length": self.ref_length,
            "smoothing": self.smoothing.value,
        }


def tokenize_basic(line: str) -> list[str]:
    """Lowercase, then split into word runs and single punctuation marks."""
    return _TOKEN_RE.findall(line.lower())


def ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def closest_ref_length(hyp_len: int, ref_lens: Iterable[int]) -> int:
    return min(ref_lens, key=lambda r: (abs(r - hyp_len), r))


def brevity_penalty(hyp_length: int, ref_length: int) -> float:
    if hyp_length >= ref_length:
        return 1.0
    if hyp_length == 0:
        return 0.0
    return math.exp(1.0 - ref_length / hyp_length)


def corpus_bleu(
    pairs: Sequence[SentencePair],
    max_n: int = 4,
    smoothing: Smoothing | str = Smoothing.NONE,
) -> BleuReport:
    smoothing = Smoothing(smoothing)
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if not pairs:
        raise ValueError("cannot score an empty corpus")

    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for pair in pairs:
        hyp = pair.hypothesis
        hyp_len += len(hyp)
        ref_len += closest_ref_length(len(hyp), (len(r) for r in pair.references))
        for n in range(1, max_n + 1):
            counts = ngram_counts(hyp, n)
            if not counts:
                continue
            max_ref: Counter = Counter()
            for ref in pair.references:
                max_ref |= ngram_counts(ref, n)
            matches[n - 1] += sum(min(c, max_ref[g]) for g, c in counts.items())
            totals[n - 1] += sum(counts.values())

    precisions = []
    for n in range(1, max_n + 1):
        m, t = matches[n - 1], totals[n - 1]
        if smoothing is Smoothing.ADD_ONE and n > 1:
            m, t = m + 1, t + 1
        precisions.append(m / t if t else 0.0)

    bp = brevity_penalty(hyp_len, ref_len)
    if min(precisions) == 0.0:
        score = 0.0
    else:
        score = 100.0 * bp * math.exp(math.fsum(math.log(p) for p in precisions) / max_n)
    return BleuReport(
        tuple(precisions), tuple(matches), tuple(totals), bp, score, hyp_len, ref_len, smoothing
    )


def pairs_from_lines(
    hyp_lines: Sequence[str],
    ref_line_sets: Sequence[Sequence[str]],
    pretokenized: bool = False,
) -> list[SentencePair]:
    """Zip a hypothesis stream with one or more aligned reference streams."""
    tok = str.split if pretokenized else tokenize_basic
    for refs in ref_line_sets:
        if len(refs) != len(hyp_lines):
            raise ValueError(
                f"line count mismatch: {len(hyp_lines)} hypotheses vs {len(refs)} references"
            )
    return [
        SentencePair(tuple(tok(h)), tuple(tuple(tok(refs[i])) for refs in ref_line_sets))
        for i, h in enumerate(hyp_lines)
    ]
