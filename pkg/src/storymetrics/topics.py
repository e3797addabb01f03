"""Topic modeling: preprocessing, collapsed-Gibbs LDA, keyword overlap.

The sampler is deliberately single-threaded and seeded so that a fixed
(docs, K, alpha, beta, iterations, seed) tuple reproduces the model bit for
bit. Estimates come from the final sweep's counts with Dirichlet smoothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus, tokenize, warn
from .errors import PreprocessError

DEFAULT_K = 4
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
DEFAULT_TOP_N = 10
MIN_TOKEN_LENGTH = 3


def default_alpha(k: int) -> float:
    return 50.0 / k


@dataclass(frozen=True)
class PreprocessedDocs:
    vocabulary: tuple[str, ...]
    docs: tuple[tuple[int, ...], ...]
    removed_stopwords: int
    removed_names: int


@dataclass(frozen=True)
class TopicModel:
    k: int
    alpha: float
    beta: float
    phi: np.ndarray  # K x V, rows sum to 1
    theta: np.ndarray  # D x K, rows sum to 1
    vocabulary: tuple[str, ...]
    seed: int
    iterations: int

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        for name, rows in (("phi", self.phi), ("theta", self.theta)):
            if rows.size and ((rows < 0).any() or np.abs(rows.sum(axis=1) - 1.0).max() > 1e-9):
                raise ValueError(f"{name} rows must be distributions summing to 1")


def load_term_file(path: str | Path) -> frozenset[str]:
    """One lowercase term per line; '#' lines are comments."""
    terms = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.add(line.lower())
    return frozenset(terms)


def preprocess(
    corpus: Corpus, stopwords: frozenset[str], name_list: frozenset[str] = frozenset()
) -> PreprocessedDocs:
    """Lowercase and filter story tokens, one document per story.

    Drops stopwords, gazetteer names, tokens shorter than three characters,
    and capitalized tokens whose lowercase form never occurs uncapitalized
    anywhere in the corpus (a proper-noun heuristic backing up the explicit
    name list). Documents that lose every token stay in place as empty
    sequences.
    """
    if not stopwords:
        raise ValueError("stopword list must be non-empty")
    raw_docs = [tokenize(story.text) for story in corpus]

    lowercase_seen: set[str] = set()
    for tokens in raw_docs:
        for tok in tokens:
            if not tok[0].isupper():
                lowercase_seen.add(tok.lower())

    vocabulary: list[str] = []
    index: dict[str, int] = {}
    docs: list[tuple[int, ...]] = []
    removed_stopwords = 0
    removed_names = 0
    for story, tokens in zip(corpus, raw_docs):
        doc: list[int] = []
        for tok in tokens:
            lower = tok.lower()
            if lower in stopwords:
                removed_stopwords += 1
                continue
            if lower in name_list:
                removed_names += 1
                continue
            if len(lower) < MIN_TOKEN_LENGTH:
                continue
            if tok[0].isupper() and lower not in lowercase_seen:
                removed_names += 1
                continue
            if lower not in index:
                index[lower] = len(vocabulary)
                vocabulary.append(lower)
            doc.append(index[lower])
        if not doc:
            warn(f"story {story.id!r}: no tokens survived topic preprocessing")
        docs.append(tuple(doc))
    if not vocabulary:
        raise PreprocessError(f"corpus {corpus.label!r}: no tokens survived preprocessing")
    return PreprocessedDocs(
        vocabulary=tuple(vocabulary),
        docs=tuple(docs),
        removed_stopwords=removed_stopwords,
        removed_names=removed_names,
    )


def fit_lda(
    docs: PreprocessedDocs,
    k: int = DEFAULT_K,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> TopicModel:
    """Collapsed Gibbs sampling over token-topic assignments."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = default_alpha(k)
    nonempty = sum(1 for d in docs.docs if d)
    if nonempty < k:
        raise ValueError(f"need at least {k} non-empty documents, have {nonempty}")

    v = len(docs.vocabulary)
    d_count = len(docs.docs)
    rng = random.Random(seed)

    n_dk = [[0] * k for _ in range(d_count)]
    n_kw = [[0] * v for _ in range(k)]
    n_k = [0] * k
    assignments: list[list[int]] = []
    for d, doc in enumerate(docs.docs):
        zs = []
        for w in doc:
            z = rng.randrange(k)
            zs.append(z)
            n_dk[d][z] += 1
            n_kw[z][w] += 1
            n_k[z] += 1
        assignments.append(zs)

    v_beta = v * beta
    for _ in range(iterations):
        for d, doc in enumerate(docs.docs):
            zs = assignments[d]
            row = n_dk[d]
            for i, w in enumerate(doc):
                z = zs[i]
                row[z] -= 1
                n_kw[z][w] -= 1
                n_k[z] -= 1
                total = 0.0
                weights = []
                for t in range(k):
                    wgt = (row[t] + alpha) * (n_kw[t][w] + beta) / (n_k[t] + v_beta)
                    total += wgt
                    weights.append(total)
                u = rng.random() * total
                z = 0
                while weights[z] < u and z < k - 1:
                    z += 1
                zs[i] = z
                row[z] += 1
                n_kw[z][w] += 1
                n_k[z] += 1

    phi = np.empty((k, v), dtype=np.float64)
    for t in range(k):
        denom = n_k[t] + v_beta
        for w in range(v):
            phi[t, w] = (n_kw[t][w] + beta) / denom
    theta = np.empty((d_count, k), dtype=np.float64)
    for d, doc in enumerate(docs.docs):
        denom = len(doc) + k * alpha
        for t in range(k):
            theta[d, t] = (n_dk[d][t] + alpha) / denom
    return TopicModel(
        k=k,
        alpha=alpha,
        beta=beta,
        phi=phi,
        theta=theta,
        vocabulary=docs.vocabulary,
        seed=seed,
        iterations=iterations,
    )


def top_keywords(model: TopicModel, topic: int, n: int) -> list[str]:
    """The n highest-probability terms of a topic; ties break by vocabulary index."""
    v = len(model.vocabulary)
    if not (0 <= topic < model.k):
        raise ValueError(f"topic {topic} out of range for k={model.k}")
    if n > v:
        raise ValueError(f"asked for {n} keywords from a {v}-term vocabulary")
    row = model.phi[topic]
    order = sorted(range(v), key=lambda w: (-row[w], w))
    return [model.vocabulary[w] for w in order[:n]]


@dataclass(frozen=True)
class TopicOverlap:
    grid: tuple[tuple[float, ...], ...]  # K_A x K_B Jaccard of top-n keyword sets
    most_shared_cell: tuple[int, int]
    most_shared_words: tuple[str, ...]
    least_shared_cell: tuple[int, int]
    least_shared_words: tuple[str, ...]  # symmetric difference of the weakest cell


def topic_overlap(model_a: TopicModel, model_b: TopicModel, n: int = DEFAULT_TOP_N) -> TopicOverlap:
    """Jaccard similarity of top-n keyword sets for every topic pair.

    Alongside the grid, reports the strongest cell's shared words and the
    weakest cell's symmetric difference (first cell in row-major order on
    ties).
    """
    sets_a = [set(top_keywords(model_a, t, n)) for t in range(model_a.k)]
    sets_b = [set(top_keywords(model_b, t, n)) for t in range(model_b.k)]
    grid = []
    best = worst = (0, 0)
    best_val, worst_val = -1.0, 2.0
    for i, sa in enumerate(sets_a):
        grid_row = []
        for j, sb in enumerate(sets_b):
            union = len(sa | sb)
            cell = len(sa & sb) / union if union else 0.0
            grid_row.append(cell)
            if cell > best_val:
                best, best_val = (i, j), cell
            if cell < worst_val:
                worst, worst_val = (i, j), cell
        grid.append(tuple(grid_row))
    shared = tuple(sorted(sets_a[best[0]] & sets_b[best[1]]))
    disjoint = tuple(sorted(sets_a[worst[0]] ^ sets_b[worst[1]]))
    return TopicOverlap(
        grid=tuple(grid),
        most_shared_cell=best,
        most_shared_words=shared,
        least_shared_cell=worst,
        least_shared_words=disjoint,
    )


def dump_model(model: TopicModel, path: str | Path) -> None:
    """Write a line-oriented model dump: priors, seed, vocabulary, phi rows."""
    lines = [
        f"k\t{model.k}",
        f"alpha\t{model.alpha!r}",
        f"beta\t{model.beta!r}",
        f"iterations\t{model.iterations}",
        f"seed\t{model.seed}",
        "vocabulary\t" + "\t".join(model.vocabulary),
    ]
    for t in range(model.k):
        lines.append(f"phi\t{t}\t" + "\t".join(repr(float(x)) for x in model.phi[t]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> TopicModel:
    """Reload a model dump; theta is not stored and comes back empty."""
    header: dict[str, str] = {}
    vocabulary: tuple[str, ...] = ()
    phi_rows: dict[int, list[float]] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, _, rest = line.partition("\t")
        if key == "vocabulary":
            vocabulary = tuple(rest.split("\t"))
        elif key == "phi":
            idx, _, values = rest.partition("\t")
            phi_rows[int(idx)] = [float(x) for x in values.split("\t")]
        else:
            header[key] = rest
    k = int(header["k"])
    phi = np.array([phi_rows[t] for t in range(k)], dtype=np.float64)
    return TopicModel(
        k=k,
        alpha=float(header["alpha"]),
        beta=float(header["beta"]),
        phi=phi,
        theta=np.empty((0, k), dtype=np.float64),
        vocabulary=vocabulary,
        seed=int(header["seed"]),
        iterations=int(header["iterations"]),
    )
