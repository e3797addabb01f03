"""Acceptance gate: one test per shipping criterion, each printing a
PASS/FAIL line in the terminal summary (see conftest.criterion)."""

import json
import math
import random
import subprocess
import sys
import time
from itertools import product
from pathlib import Path

import numpy as np

from conftest import criterion
from storymetrics.conllu import parse_conllu, parse_conllu_file, serialize_conllu
from storymetrics.corpus import Corpus, Story
from storymetrics.genharness import TEMPLATE_MODES, TEMPLATES, GenerationConfig, generate_corpus
from storymetrics.structure import DependencyGraph, HashProfile, structural_overlap, wl_hash
from storymetrics.textstats import DocumentStats, fres
from storymetrics.topics import fit_lda, preprocess, top_keywords
from storymetrics.toxicity import ToxicityLexicon, bin_scores, score_sentence_lexicon

FIXTURES = Path(__file__).parent / "fixtures"


def test_eq1_exactness():
    with criterion("Flesch formula exactness and scale invariance (< 1 s)"):
        start = time.perf_counter()
        assert abs(fres(DocumentStats(1, 10, 15)) - 69.785) <= 1e-9
        assert abs(fres(DocumentStats(1, 3, 3)) - 119.19) <= 1e-9
        rng = random.Random(20240817)
        for _ in range(1000):
            sentences = rng.randint(1, 400)
            words = rng.randint(sentences, 8000)
            syllables = rng.randint(words, 20000)
            factor = rng.randint(2, 12)
            base = fres(DocumentStats(sentences, words, syllables))
            scaled = fres(
                DocumentStats(sentences * factor, words * factor, syllables * factor)
            )
            assert math.isclose(base, scaled, rel_tol=0, abs_tol=1e-9)
        assert time.perf_counter() - start < 1.0


def _all_tree_shapes(max_nodes: int) -> list[tuple[int, ...]]:
    def canon(parents):
        children = [[] for _ in range(len(parents) + 1)]
        for i, p in enumerate(parents, start=1):
            children[p].append(i)

        def enc(v):
            return "(" + "".join(sorted(enc(c) for c in children[v])) + ")"

        return enc(0)

    shapes = {canon(()): ()}
    for n in range(2, max_nodes + 1):
        for parents in product(*[range(i) for i in range(1, n)]):
            shapes.setdefault(canon(parents), parents)
    return list(shapes.values())


def _tree_graph(parents: tuple[int, ...]) -> DependencyGraph:
    edges = frozenset((p, i) for i, p in enumerate(parents, start=1))
    return DependencyGraph(len(parents) + 1, edges)


def test_wl_correctness():
    with criterion(
        "WL hashing: small trees distinct, permutation invariant, goldens stable (< 10 s)"
    ):
        start = time.perf_counter()

        shapes = _all_tree_shapes(5)
        assert len(shapes) == 17  # 1+1+2+4+9 rooted trees on 1..5 nodes
        hashes = [wl_hash(_tree_graph(p)) for p in shapes]
        assert len(set(hashes)) == len(hashes)

        rng = random.Random(424242)
        for _ in range(1000):
            n = rng.randint(2, 12)
            parents = tuple(rng.randint(0, i - 1) for i in range(1, n))
            graph = _tree_graph(parents)
            mapping = list(range(n))
            rng.shuffle(mapping)
            permuted = DependencyGraph(
                n, frozenset((mapping[a], mapping[b]) for a, b in graph.edges)
            )
            assert wl_hash(permuted) == wl_hash(graph)

        path3 = DependencyGraph(3, frozenset({(0, 1), (1, 2)}))
        star3 = DependencyGraph(3, frozenset({(0, 1), (0, 2)}))
        for _ in range(2):
            assert wl_hash(path3) == "e45b032544487d0cce1e020ece89768e"
            assert wl_hash(star3) == "f6a72a581170e22ab4de39377de5fa40"

        assert time.perf_counter() - start < 10.0


def _profile(hashes: dict[str, int]) -> HashProfile:
    return HashProfile(
        corpus_label="p", hash_multiplicity=hashes, sentence_count=sum(hashes.values())
    )


def test_structural_overlap_metric():
    with criterion("structural overlap: self 100, disjoint 0, 33.33 case, symmetric"):
        p = _profile({"h1": 3, "h2": 1})
        assert structural_overlap(p, p) == 100.0
        assert structural_overlap(_profile({"h1": 1}), _profile({"h2": 2})) == 0.0
        a = _profile({"h1": 4, "h2": 1})
        b = _profile({"h2": 7, "h3": 2})
        assert abs(structural_overlap(a, b) - 33.33) <= 0.01
        rng = random.Random(7)
        pool = [f"g{i}" for i in range(15)]
        for _ in range(100):
            left = _profile(
                {h: rng.randint(1, 5) for h in rng.sample(pool, rng.randint(1, 10))}
            )
            right = _profile(
                {h: rng.randint(1, 5) for h in rng.sample(pool, rng.randint(1, 10))}
            )
            assert structural_overlap(left, right) == structural_overlap(right, left)


def test_toxicity_binning():
    with criterion("toxicity binning partitions 10k scores; lexicon combination rule"):
        rng = random.Random(99)
        scores = [rng.random() for _ in range(9999)] + [1.0]
        hist = bin_scores(scores, "toxic")
        assert abs(sum(hist.bins) - 100.0) <= 1e-6

        # independent bin assignment: exactly one half-open bin per score,
        # the last bin closed at 1.0
        counts = [0] * 10
        for s in scores:
            matches = [
                i
                for i in range(10)
                if (i / 10 <= s < (i + 1) / 10) or (i == 9 and s == 1.0)
            ]
            assert len(matches) == 1
            counts[matches[0]] += 1
        assert sum(counts) == 10000
        for i in range(10):
            assert math.isclose(hist.bins[i], counts[i] / 100, abs_tol=1e-9)
        assert counts[9] >= 1  # the boundary 1.0 landed in the top bin

        lexicon = ToxicityLexicon(
            {"alpha": {"toxic": 0.8}, "beta": {"toxic": 0.5}, "gamma": {"toxic": 0.5}}
        )
        assert score_sentence_lexicon("alpha word", lexicon).toxic == 0.8
        assert math.isclose(
            score_sentence_lexicon("beta gamma", lexicon).toxic, 0.75, abs_tol=1e-12
        )


def test_lda_recovery():
    with criterion(
        "LDA: planted topics recovered at 100% top-5 purity, deterministic (< 30 s)"
    ):
        start = time.perf_counter()
        rng = random.Random(1234)
        vocab_a = ["river", "stone", "forest", "mountain", "valley",
                   "meadow", "stream", "cliff", "pine", "moss"]
        vocab_b = ["engine", "wheel", "piston", "signal", "track",
                   "station", "carriage", "boiler", "whistle", "rail"]
        stories = []
        for i in range(20):
            stories.append(
                Story(
                    id=f"a{i}", title="", category="old",
                    text=" ".join(rng.choice(vocab_a) for _ in range(45)) + ".",
                )
            )
        for i in range(20):
            stories.append(
                Story(
                    id=f"b{i}", title="", category="old",
                    text=" ".join(rng.choice(vocab_b) for _ in range(45)) + ".",
                )
            )
        corpus = Corpus(label="planted", stories=tuple(stories))
        docs = preprocess(corpus, frozenset({"the"}), frozenset())
        assert len(docs.docs) == 40

        model = fit_lda(docs, k=2, alpha=1.0, beta=0.01, iterations=500, seed=7)
        assert np.abs(model.phi.sum(axis=1) - 1.0).max() <= 1e-9
        assert np.abs(model.theta.sum(axis=1) - 1.0).max() <= 1e-9

        tops = [set(top_keywords(model, t, 5)) for t in range(2)]
        set_a, set_b = set(vocab_a), set(vocab_b)
        # 100% purity: each topic's top five all come from a single planted
        # vocabulary, and the two topics cover different vocabularies
        assert tops[0] <= set_a or tops[0] <= set_b
        assert tops[1] <= set_a or tops[1] <= set_b
        assert (tops[0] <= set_a) != (tops[1] <= set_a)

        again = fit_lda(docs, k=2, alpha=1.0, beta=0.01, iterations=500, seed=7)
        assert np.array_equal(model.phi, again.phi)
        assert np.array_equal(model.theta, again.theta)

        assert time.perf_counter() - start < 30.0


def test_conllu_round_trip():
    with criterion("CoNLL-U 50-sentence fixture: parse -> serialize -> parse identity"):
        fixture = FIXTURES / "sentences.conllu"
        raw = fixture.read_text(encoding="utf-8")
        assert raw.count("# sent_id") == 50
        assert any("-" in line.split("\t")[0] for line in raw.splitlines() if "\t" in line)
        first = parse_conllu_file(fixture)
        assert len(first) == 50
        second = parse_conllu(serialize_conllu(first))
        assert second == first


def test_template_fidelity_and_generation_count(completion_endpoint):
    with criterion("templates byte-identical to fixtures; 122 stories x 5 = 610 records"):
        for mode in TEMPLATE_MODES:
            tag = mode.removeprefix("template_")
            fixture = (FIXTURES / "templates" / f"template_{tag}.txt").read_bytes()
            assert TEMPLATES[mode].encode("utf-8") == fixture

        sources = Corpus(
            label="sources",
            stories=tuple(
                Story(
                    id=f"s{i:03d}",
                    title=f"Story Number {i}",
                    category="old",
                    text=f"Story {i} begins here. It ends soon after.",
                )
                for i in range(122)
            ),
        )
        config = GenerationConfig(
            endpoint=completion_endpoint, model_name="mock", samples_per_prompt=5
        )
        records = generate_corpus(sources, "template_T1", config)
        assert len(records) == 610
        assert len({r.id for r in records}) == 610
        by_sample = {r.sample_index for r in records}
        assert by_sample == {0, 1, 2, 3, 4}


def test_end_to_end_determinism(tmp_path):
    with criterion(
        "analyze: byte-identical reruns, five sections, skip-with-reason without parses"
    ):
        config = FIXTURES / "corpora" / "pipeline.yaml"
        outputs = []
        for name in ("run1", "run2"):
            out = tmp_path / name
            proc = subprocess.run(
                [
                    sys.executable, "-m", "storymetrics", "analyze",
                    "--config", str(config), "--out", str(out),
                ],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outputs.append((out / "report.json").read_bytes())
        assert outputs[0] == outputs[1]

        data = json.loads(outputs[0])
        assert set(data["sections"]) == {
            "sentence_length",
            "readability",
            "toxicity",
            "topics",
            "structure",
        }
        assert data["skips"] == []

        no_conllu = FIXTURES / "corpora" / "pipeline_noconllu.yaml"
        proc = subprocess.run(
            [
                sys.executable, "-m", "storymetrics", "analyze",
                "--config", str(no_conllu), "--out", str(tmp_path / "skips"),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        skipped = json.loads((tmp_path / "skips" / "report.json").read_text())
        assert "structure" not in skipped["sections"]
        reasons = {
            (s["section"], s["corpus"]): s["reason"] for s in skipped["skips"]
        }
        assert reasons[("structure", "old_mini")]
        assert reasons[("structure", "modern_mini")]
