"""Per-sentence toxicity scoring and histogram binning.

Two scorers share one output shape: a deterministic lexicon baseline that
runs offline, and a client for the remote scoring service's /toxicity
endpoint. Scores are per sentence, six categories, each in [0, 1].
"""

from __future__ import annotations

import math
from bisect import bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import requests

from .corpus import tokenize
from .errors import RemoteScorerError, ScorerProtocolError

CATEGORIES = ("toxic", "severe_toxic", "obscene", "threat", "insult", "identity_hate")

_BIN_EDGES = tuple(i / 10 for i in range(11))  # 0.0, 0.1, ..., 1.0


@dataclass(frozen=True)
class ToxicityScores:
    toxic: float = 0.0
    severe_toxic: float = 0.0
    obscene: float = 0.0
    threat: float = 0.0
    insult: float = 0.0
    identity_hate: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (0.0 <= v <= 1.0) or math.isnan(v):
                raise ValueError(f"{f.name} score {v} outside [0, 1]")

    def get(self, category: str) -> float:
        return getattr(self, category)


@dataclass(frozen=True)
class ToxicityHistogram:
    category: str
    bins: tuple[float, ...]  # percentages for [0,0.1), ..., [0.9,1.0]
    sentence_count: int


class ToxicityLexicon:
    """Lowercase term -> per-category weight map."""

    def __init__(self, entries: dict[str, dict[str, float]]):
        for term, weights in entries.items():
            if not term or term != term.lower():
                raise ValueError(f"lexicon term {term!r} must be non-empty lowercase")
            for cat, w in weights.items():
                if cat not in CATEGORIES:
                    raise ValueError(f"lexicon term {term!r}: unknown category {cat!r}")
                if not (0.0 <= w <= 1.0):
                    raise ValueError(f"lexicon term {term!r}: weight {w} outside [0, 1]")
        self.entries = entries

    @classmethod
    def from_file(cls, path: str | Path) -> "ToxicityLexicon":
        """Parse "term<TAB>category=weight[,category=weight...]" lines."""
        entries: dict[str, dict[str, float]] = {}
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    term, spec = line.split("\t", 1)
                except ValueError:
                    raise ValueError(f"{path}:{line_no}: expected term<TAB>assignments") from None
                weights = {}
                for assignment in spec.split(","):
                    cat, _, value = assignment.partition("=")
                    weights[cat.strip()] = float(value)
                entries[term.strip()] = weights
        return cls(entries)


def score_sentence_lexicon(sentence: str, lexicon: ToxicityLexicon) -> ToxicityScores:
    """Combine matched-term weights per category as 1 - prod(1 - w)."""
    remaining = {cat: 1.0 for cat in CATEGORIES}
    for token in tokenize(sentence):
        weights = lexicon.entries.get(token.lower())
        if not weights:
            continue
        for cat, w in weights.items():
            remaining[cat] *= 1.0 - w
    return ToxicityScores(**{cat: 1.0 - rem for cat, rem in remaining.items()})


def _parse_score_record(record, context: str) -> ToxicityScores:
    if not isinstance(record, dict):
        raise ScorerProtocolError(f"{context}: score record is not an object")
    try:
        values = {cat: float(record[cat]) for cat in CATEGORIES}
    except KeyError as exc:
        raise ScorerProtocolError(f"{context}: missing category {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ScorerProtocolError(f"{context}: non-numeric score: {exc}") from exc
    try:
        return ToxicityScores(**values)
    except ValueError as exc:
        raise ScorerProtocolError(f"{context}: {exc}") from exc


def score_sentences_remote(
    sentences: list[str],
    endpoint: str,
    batch_size: int = 32,
    max_in_flight: int = 4,
    timeout: float = 30.0,
) -> list[ToxicityScores]:
    """Score sentences via the remote service, preserving input order.

    Batches are dispatched concurrently up to ``max_in_flight`` and results
    are reassembled in input order.
    """
    if not sentences:
        return []
    url = endpoint.rstrip("/") + "/toxicity"
    batches = [sentences[i : i + batch_size] for i in range(0, len(sentences), batch_size)]

    def post(batch: list[str]) -> list[ToxicityScores]:
        try:
            resp = requests.post(url, json={"sentences": batch}, timeout=timeout)
        except requests.RequestException as exc:
            raise RemoteScorerError(f"toxicity scorer at {endpoint} unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise RemoteScorerError(
                f"toxicity scorer at {endpoint} returned status {resp.status_code}"
            )
        try:
            payload = resp.json()
        except ValueError as exc:
            raise ScorerProtocolError(f"{endpoint}: response is not JSON: {exc}") from exc
        records = payload.get("scores") if isinstance(payload, dict) else None
        if not isinstance(records, list) or len(records) != len(batch):
            raise ScorerProtocolError(
                f"{endpoint}: expected {len(batch)} score records, "
                f"got {len(records) if isinstance(records, list) else 'none'}"
            )
        return [_parse_score_record(r, endpoint) for r in records]

    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        results = list(pool.map(post, batches))
    return [score for chunk in results for score in chunk]


def score_sentence_remote(sentence: str, endpoint: str, timeout: float = 30.0) -> ToxicityScores:
    """Score a single sentence via the remote service."""
    return score_sentences_remote([sentence], endpoint, timeout=timeout)[0]


def bin_scores(scores: list[float], category: str) -> ToxicityHistogram:
    """Bin scores into ten width-0.1 bins expressed as percentages.

    Bins are half-open except the last, which closes at 1.0.
    """
    counts = [0] * 10
    for s in scores:
        if not (0.0 <= s <= 1.0) or math.isnan(s):
            raise ValueError(f"score {s} outside [0, 1]")
        idx = min(bisect_right(_BIN_EDGES, s) - 1, 9)
        counts[idx] += 1
    total = len(scores)
    if total:
        bins = tuple(100.0 * c / total for c in counts)
    else:
        bins = tuple(0.0 for _ in counts)
    return ToxicityHistogram(category=category, bins=bins, sentence_count=total)


def render_histogram(h: ToxicityHistogram, omit_first_bin: bool = False) -> list[tuple[str, float]]:
    """(bin label, percentage) rows; optionally drop the [0.0,0.1) row."""
    rows = []
    for i, pct in enumerate(h.bins):
        if omit_first_bin and i == 0:
            continue
        closer = "]" if i == 9 else ")"
        label = f"[{_BIN_EDGES[i]:.1f},{_BIN_EDGES[i + 1]:.1f}{closer}"
        rows.append((label, pct))
    return rows
