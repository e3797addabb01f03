"""Reading-ease scores and sentence-length distribution summaries."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import segment_sentences, tokenize

_VOWELS = frozenset("aeiouy")


@dataclass(frozen=True)
class DocumentStats:
    total_sentences: int
    total_words: int
    total_syllables: int


@dataclass(frozen=True)
class DistributionSummary:
    n: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    outlier_count: int
    values_retained: tuple[float, ...]


def count_syllables(word: str) -> int:
    """Estimate syllables in a word.

    Counts maximal vowel runs (a, e, i, o, u, y), drops a trailing silent 'e'
    (final 'e' not preceded by a vowel, when more than one run was found),
    restores one for consonant+'le' endings, and never returns less than 1.
    """
    if not word:
        raise ValueError("cannot count syllables of an empty word")
    w = word.lower()
    count = 0
    prev_vowel = False
    for ch in w:
        is_vowel = ch in _VOWELS
        if is_vowel and not prev_vowel:
            count += 1
        prev_vowel = is_vowel
    if count > 1 and w.endswith("e") and len(w) >= 2 and w[-2] not in _VOWELS:
        count -= 1
    if len(w) > 2 and w.endswith("le") and w[-3] not in _VOWELS:
        count += 1
    return max(count, 1)


def fres(stats: DocumentStats) -> float:
    """Flesch reading ease: 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words).

    The formula is unbounded; values outside [0, 100] are possible and
    returned as-is.
    """
    if stats.total_sentences < 1:
        raise ValueError("reading ease needs at least one sentence")
    if stats.total_words < 1:
        raise ValueError("reading ease needs at least one word")
    words_per_sentence = stats.total_words / stats.total_sentences
    syllables_per_word = stats.total_syllables / stats.total_words
    return 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word


def fres_in_range(scores: list[float]) -> list[float]:
    """Keep only scores within the nominal [0, 100] range, order preserved."""
    return [s for s in scores if 0.0 <= s <= 100.0]


def document_stats(text: str) -> DocumentStats:
    """Segment, tokenize, and count a document for the reading-ease formula."""
    sentences = segment_sentences(text)
    words = 0
    syllables = 0
    for sentence in sentences:
        for token in tokenize(sentence):
            words += 1
            syllables += count_syllables(token)
    return DocumentStats(
        total_sentences=len(sentences), total_words=words, total_syllables=syllables
    )


def sentence_lengths(text: str) -> list[int]:
    """Token count of each sentence in the text."""
    return [len(tokenize(s)) for s in segment_sentences(text)]


def _quantile(sorted_values: list[float], p: float) -> float:
    """Linear interpolation between closest ranks on presorted data."""
    n = len(sorted_values)
    if n == 1:
        return float(sorted_values[0])
    h = (n - 1) * p
    lo = int(h)
    frac = h - lo
    if lo + 1 >= n:
        return float(sorted_values[-1])
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo])


def summarize_distribution(values: list[int | float]) -> DistributionSummary:
    """Five-number summary plus 1.5*IQR outlier flagging.

    Quartiles are computed over all values; a value is an outlier iff it
    falls outside [q1 - 1.5*IQR, q3 + 1.5*IQR]. Retained values keep input
    order.
    """
    if not values:
        raise ValueError("cannot summarize an empty list")
    ordered = sorted(float(v) for v in values)
    q1 = _quantile(ordered, 0.25)
    median = _quantile(ordered, 0.5)
    q3 = _quantile(ordered, 0.75)
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    retained = tuple(float(v) for v in values if lo_fence <= float(v) <= hi_fence)
    return DistributionSummary(
        n=len(values),
        min=ordered[0],
        q1=q1,
        median=median,
        q3=q3,
        max=ordered[-1],
        outlier_count=len(values) - len(retained),
        values_retained=retained,
    )


def sentence_length_summary(lengths: list[int]) -> DistributionSummary:
    """Distribution summary of per-sentence token counts."""
    return summarize_distribution(lengths)
