"""Dependency-structure fingerprints.

Parsed sentences are reduced to unlabeled directed graphs (head -> dependent,
words discarded), hashed with a Weisfeiler-Lehman relabeling scheme, and
compared across corpora by hash-set overlap. Hashes are stable across runs
and platforms (blake2b over canonical byte strings).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from hashlib import blake2b
from pathlib import Path
from typing import Iterable, Mapping

from .conllu import ConlluSentence
from .corpus import Corpus, warn

_DIGEST_SIZE = 16
DEFAULT_WL_ITERATIONS = 3


@dataclass(frozen=True)
class DependencyGraph:
    node_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for head, dep in self.edges:
            if head == dep:
                raise ValueError(f"self-loop on node {head}")
            if not (0 <= head < self.node_count and 0 <= dep < self.node_count):
                raise ValueError(f"edge ({head}, {dep}) outside 0..{self.node_count - 1}")


@dataclass(frozen=True)
class HashProfile:
    corpus_label: str
    hash_multiplicity: Mapping[str, int]
    sentence_count: int

    @property
    def distinct_hashes(self) -> frozenset[str]:
        return frozenset(self.hash_multiplicity)


def graph_from_conllu(sentence: ConlluSentence) -> DependencyGraph:
    """One node per token, an edge head->dependent per non-root token.

    The synthetic root is not materialized; a well-formed parse therefore
    yields a tree with node_count - 1 edges. Non-tree parser output is
    accepted with a warning.
    """
    n = len(sentence.tokens)
    if n == 0:
        raise ValueError("cannot build a graph from an empty sentence")
    edges = frozenset(
        (tok.head - 1, tok.id - 1) for tok in sentence.tokens if tok.head != 0
    )
    graph = DependencyGraph(node_count=n, edges=edges)
    if len(edges) != n - 1:
        warn(
            f"story {sentence.source_story_id!r} sentence {sentence.sentence_index}: "
            f"{len(edges)} edges for {n} nodes (not a tree); hashing as-is"
        )
    return graph


def _digest(payload: str) -> str:
    return blake2b(payload.encode("utf-8"), digest_size=_DIGEST_SIZE).hexdigest()


def wl_hash(graph: DependencyGraph, iterations: int = DEFAULT_WL_ITERATIONS) -> str:
    """Weisfeiler-Lehman hash for a directed graph.

    Nodes start labeled with (in-degree, out-degree); each iteration digests
    (own label, sorted predecessor labels, sorted successor labels). The
    graph hash digests the sorted final label multiset together with the
    node count, so isomorphic graphs hash identically regardless of node
    numbering.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    n = graph.node_count
    preds: list[list[int]] = [[] for _ in range(n)]
    succs: list[list[int]] = [[] for _ in range(n)]
    for head, dep in graph.edges:
        succs[head].append(dep)
        preds[dep].append(head)

    labels = [f"{len(preds[v])},{len(succs[v])}" for v in range(n)]
    for _ in range(iterations):
        labels = [
            _digest(
                labels[v]
                + "|"
                + ",".join(sorted(labels[u] for u in preds[v]))
                + "|"
                + ",".join(sorted(labels[u] for u in succs[v]))
            )
            for v in range(n)
        ]
    return _digest(f"{n}|" + ",".join(sorted(labels)))


def corpus_hash_profile(
    corpus: Corpus,
    parses: Mapping[str, list[ConlluSentence]],
    iterations: int = DEFAULT_WL_ITERATIONS,
) -> HashProfile:
    """Hash every sentence graph in the corpus and accumulate multiplicities."""
    multiplicity: Counter[str] = Counter()
    total = 0
    for story in corpus:
        if story.id not in parses:
            raise KeyError(f"story {story.id!r} has no parses")
        for sentence in parses[story.id]:
            multiplicity[wl_hash(graph_from_conllu(sentence), iterations)] += 1
            total += 1
    if total == 0:
        raise ValueError(f"corpus {corpus.label!r} has no parsed sentences to hash")
    return HashProfile(
        corpus_label=corpus.label, hash_multiplicity=dict(multiplicity), sentence_count=total
    )


def structural_overlap(a: HashProfile, b: HashProfile) -> float:
    """Jaccard overlap of distinct hash sets, as a percentage."""
    if not a.hash_multiplicity or not b.hash_multiplicity:
        raise ValueError("structural overlap needs two non-empty profiles")
    sa, sb = a.distinct_hashes, b.distinct_hashes
    return 100.0 * len(sa & sb) / len(sa | sb)


def directional_overlaps(a: HashProfile, b: HashProfile) -> tuple[float, float]:
    """(|A∩B|/|A|, |A∩B|/|B|) as percentages: both directional readings."""
    if not a.hash_multiplicity or not b.hash_multiplicity:
        raise ValueError("structural overlap needs two non-empty profiles")
    sa, sb = a.distinct_hashes, b.distinct_hashes
    shared = len(sa & sb)
    return 100.0 * shared / len(sa), 100.0 * shared / len(sb)


def dump_profile(profile: HashProfile, path: str | Path) -> None:
    """Write "hash<TAB>count" lines, sorted by hash."""
    lines = [f"{h}\t{profile.hash_multiplicity[h]}" for h in sorted(profile.hash_multiplicity)]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_profile(path: str | Path, corpus_label: str) -> HashProfile:
    multiplicity: dict[str, int] = {}
    total = 0
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        h, count = line.split("\t")
        multiplicity[h] = int(count)
        total += int(count)
    return HashProfile(
        corpus_label=corpus_label, hash_multiplicity=multiplicity, sentence_count=total
    )


def graphs_for_sentences(sentences: Iterable[ConlluSentence]) -> list[DependencyGraph]:
    return [graph_from_conllu(s) for s in sentences]
