"""Pipeline orchestration: run every enabled analysis over the configured
corpora and emit a machine-readable comparison report.

The report is data, not plots: distribution summaries, histograms, overlap
grids, and matrices, each of which maps one-to-one onto a figure or table a
downstream script can render. Runs are deterministic: fixed config, inputs,
and seeds produce byte-identical output files.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from importlib import resources as importlib_resources
from itertools import combinations
from pathlib import Path

import yaml

from . import conllu, structure, textstats, topics, toxicity
from .corpus import Corpus, load_corpus, segment_sentences, warn
from .errors import (
    ConfigError,
    ConlluParseError,
    PreprocessError,
    RemoteScorerError,
    ScorerProtocolError,
    StorymetricsError,
)

SECTIONS = ("sentence_length", "readability", "toxicity", "topics", "structure")

TOXICITY_ENDPOINT_ENV = "STORYMETRICS_TOXICITY_ENDPOINT"
COMPLETION_ENDPOINT_ENV = "STORYMETRICS_COMPLETION_ENDPOINT"


@dataclass
class CorpusSpec:
    label: str
    manifest: Path
    conllu_dir: Path | None


@dataclass
class PipelineConfig:
    seed: int
    corpora: list[CorpusSpec]
    enabled: dict[str, bool]
    stopwords_path: Path | None
    names_path: Path | None
    lexicon_path: Path | None
    topics_k: int
    topics_alpha: float | None
    topics_beta: float
    topics_iterations: int
    topics_top_n: int
    toxicity_scorer: str  # "lexicon" | "remote"
    toxicity_endpoint: str | None
    toxicity_fallback: bool
    toxicity_batch_size: int
    toxicity_max_in_flight: int
    wl_iterations: int
    generation: dict


def _resource_terms(name: str) -> frozenset[str]:
    ref = importlib_resources.files("storymetrics.resources") / name
    terms = set()
    for line in ref.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.add(line.lower())
    return frozenset(terms)


def default_stopwords() -> frozenset[str]:
    return _resource_terms("stopwords.txt")


def default_names() -> frozenset[str]:
    return _resource_terms("names.txt")


def default_lexicon() -> toxicity.ToxicityLexicon:
    ref = importlib_resources.files("storymetrics.resources") / "toxicity_lexicon.tsv"
    with importlib_resources.as_file(ref) as path:
        return toxicity.ToxicityLexicon.from_file(path)


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    base = path.parent

    def resolve(p):
        return None if p is None else (base / str(p))

    corpora = []
    for entry in data.get("corpora") or []:
        if not isinstance(entry, dict) or "label" not in entry or "manifest" not in entry:
            raise ConfigError("each corpora entry needs 'label' and 'manifest'")
        corpora.append(
            CorpusSpec(
                label=str(entry["label"]),
                manifest=base / str(entry["manifest"]),
                conllu_dir=resolve(entry.get("conllu_dir")),
            )
        )

    analyses = data.get("analyses") or {}
    enabled = {section: bool(analyses.get(section, True)) for section in SECTIONS}

    res = data.get("resources") or {}
    topics_cfg = data.get("topics") or {}
    tox_cfg = data.get("toxicity") or {}
    struct_cfg = data.get("structure") or {}

    scorer = str(tox_cfg.get("scorer", "lexicon"))
    if scorer not in ("lexicon", "remote"):
        raise ConfigError(f"toxicity.scorer must be 'lexicon' or 'remote', got {scorer!r}")

    endpoint = tox_cfg.get("endpoint")
    endpoint = os.environ.get(TOXICITY_ENDPOINT_ENV, endpoint)

    return PipelineConfig(
        seed=int(data.get("seed", 0)),
        corpora=corpora,
        enabled=enabled,
        stopwords_path=resolve(res.get("stopwords")),
        names_path=resolve(res.get("names")),
        lexicon_path=resolve(res.get("lexicon")),
        topics_k=int(topics_cfg.get("k", topics.DEFAULT_K)),
        topics_alpha=(None if topics_cfg.get("alpha") is None else float(topics_cfg["alpha"])),
        topics_beta=float(topics_cfg.get("beta", topics.DEFAULT_BETA)),
        topics_iterations=int(topics_cfg.get("iterations", topics.DEFAULT_ITERATIONS)),
        topics_top_n=int(topics_cfg.get("top_n", topics.DEFAULT_TOP_N)),
        toxicity_scorer=scorer,
        toxicity_endpoint=(None if endpoint is None else str(endpoint)),
        toxicity_fallback=bool(tox_cfg.get("fallback_to_lexicon", False)),
        toxicity_batch_size=int(tox_cfg.get("batch_size", 32)),
        toxicity_max_in_flight=int(tox_cfg.get("max_in_flight", 4)),
        wl_iterations=int(struct_cfg.get("wl_iterations", structure.DEFAULT_WL_ITERATIONS)),
        generation=dict(data.get("generation") or {}),
    )


@dataclass
class ComparisonReport:
    corpora: list[str]
    seed: int
    sections: dict
    skips: list[dict]

    def to_dict(self) -> dict:
        return {
            "corpora": list(self.corpora),
            "seed": self.seed,
            "skips": list(self.skips),
            "sections": self.sections,
        }


def _summary_dict(s: textstats.DistributionSummary) -> dict:
    return {
        "n": s.n,
        "min": s.min,
        "q1": s.q1,
        "median": s.median,
        "q3": s.q3,
        "max": s.max,
        "outlier_count": s.outlier_count,
    }


def _corpus_sentences(corpus: Corpus) -> list[str]:
    out = []
    for story in corpus:
        out.extend(segment_sentences(story.text))
    return out


def run_pipeline(config: PipelineConfig | str | Path, seed: int | None = None) -> ComparisonReport:
    """Execute all enabled analyses; missing prerequisites skip with a reason."""
    if not isinstance(config, PipelineConfig):
        config = load_config(config)
    if seed is not None:
        config.seed = seed
    if len(config.corpora) < 2:
        raise ConfigError(f"comparison needs at least 2 corpora, got {len(config.corpora)}")

    corpora = []
    for spec in config.corpora:
        corpus = load_corpus(spec.manifest)
        if corpus.label != spec.label:
            warn(
                f"manifest label {corpus.label!r} differs from config label {spec.label!r}; "
                "using the config label"
            )
            corpus = Corpus(label=spec.label, stories=corpus.stories)
        corpora.append(corpus)

    labels = [spec.label for spec in config.corpora]
    if len(set(labels)) != len(labels):
        raise ConfigError("corpus labels must be distinct")

    sections: dict = {}
    skips: list[dict] = []

    # shared segmentation
    sentences_by_corpus = {
        label: _corpus_sentences(corpus) for label, corpus in zip(labels, corpora)
    }

    if config.enabled["sentence_length"]:
        section = {}
        for label, corpus in zip(labels, corpora):
            lengths = []
            for story in corpus:
                lengths.extend(textstats.sentence_lengths(story.text))
            if lengths:
                section[label] = _summary_dict(textstats.summarize_distribution(lengths))
            else:
                skips.append(
                    {"section": "sentence_length", "corpus": label, "reason": "no sentences"}
                )
        if section:
            sections["sentence_length"] = section

    if config.enabled["readability"]:
        section = {}
        for label, corpus in zip(labels, corpora):
            scores = []
            for story in corpus:
                stats = textstats.document_stats(story.text)
                if stats.total_sentences < 1 or stats.total_words < 1:
                    warn(f"story {story.id!r}: no scorable text, excluded from readability")
                    continue
                scores.append(textstats.fres(stats))
            if not scores:
                skips.append(
                    {"section": "readability", "corpus": label, "reason": "no scorable stories"}
                )
                continue
            in_range = textstats.fres_in_range(scores)
            section[label] = {
                "raw": _summary_dict(textstats.summarize_distribution(scores)),
                "in_range": (
                    _summary_dict(textstats.summarize_distribution(in_range))
                    if in_range
                    else None
                ),
            }
        if section:
            sections["readability"] = section

    if config.enabled["toxicity"]:
        sections_toxicity, tox_skips = _toxicity_section(config, labels, sentences_by_corpus)
        skips.extend(tox_skips)
        if sections_toxicity:
            sections["toxicity"] = sections_toxicity

    if config.enabled["topics"]:
        topics_section, topic_skips = _topics_section(config, labels, corpora)
        skips.extend(topic_skips)
        if topics_section:
            sections["topics"] = topics_section

    if config.enabled["structure"]:
        structure_section, structure_skips = _structure_section(config, labels, corpora)
        skips.extend(structure_skips)
        if structure_section:
            sections["structure"] = structure_section

    return ComparisonReport(corpora=labels, seed=config.seed, sections=sections, skips=skips)


def _toxicity_section(config: PipelineConfig, labels, sentences_by_corpus):
    skips = []
    scorer = config.toxicity_scorer
    lexicon = None
    if scorer == "lexicon" or config.toxicity_fallback:
        lexicon = (
            toxicity.ToxicityLexicon.from_file(config.lexicon_path)
            if config.lexicon_path
            else default_lexicon()
        )

    def score_all(sentences: list[str]) -> list[toxicity.ToxicityScores]:
        if scorer == "remote":
            if not config.toxicity_endpoint:
                raise RemoteScorerError("toxicity.scorer is 'remote' but no endpoint configured")
            return toxicity.score_sentences_remote(
                sentences,
                config.toxicity_endpoint,
                batch_size=config.toxicity_batch_size,
                max_in_flight=config.toxicity_max_in_flight,
            )
        return [toxicity.score_sentence_lexicon(s, lexicon) for s in sentences]

    section = {}
    for label in labels:
        sentences = sentences_by_corpus[label]
        if not sentences:
            skips.append({"section": "toxicity", "corpus": label, "reason": "no sentences"})
            continue
        try:
            scores = score_all(sentences)
        except (RemoteScorerError, ScorerProtocolError) as exc:
            if config.toxicity_fallback and scorer == "remote":
                warn(f"remote toxicity scorer failed ({exc}); falling back to lexicon")
                scores = [toxicity.score_sentence_lexicon(s, lexicon) for s in sentences]
            else:
                skips.append({"section": "toxicity", "corpus": label, "reason": str(exc)})
                continue
        per_category = {}
        for cat in toxicity.CATEGORIES:
            hist = toxicity.bin_scores([s.get(cat) for s in scores], cat)
            per_category[cat] = {
                "bins": list(hist.bins),
                "sentence_count": hist.sentence_count,
            }
        section[label] = per_category
    return section, skips


def _topics_section(config: PipelineConfig, labels, corpora):
    skips = []
    stopwords = (
        topics.load_term_file(config.stopwords_path)
        if config.stopwords_path
        else default_stopwords()
    )
    names = (
        topics.load_term_file(config.names_path) if config.names_path else default_names()
    )
    models = {}
    keywords = {}
    preprocessing = {}
    for label, corpus in zip(labels, corpora):
        try:
            docs = topics.preprocess(corpus, stopwords, names)
            model = topics.fit_lda(
                docs,
                k=config.topics_k,
                alpha=config.topics_alpha,
                beta=config.topics_beta,
                iterations=config.topics_iterations,
                seed=config.seed,
            )
        except (PreprocessError, ValueError) as exc:
            skips.append({"section": "topics", "corpus": label, "reason": str(exc)})
            continue
        models[label] = model
        preprocessing[label] = {
            "vocabulary_size": len(docs.vocabulary),
            "removed_stopwords": docs.removed_stopwords,
            "removed_names": docs.removed_names,
        }
        keywords[label] = [
            topics.top_keywords(model, t, min(config.topics_top_n, len(model.vocabulary)))
            for t in range(model.k)
        ]

    overlaps = {}
    for a, b in combinations(labels, 2):
        if a not in models or b not in models:
            continue
        n = min(
            config.topics_top_n, len(models[a].vocabulary), len(models[b].vocabulary)
        )
        result = topics.topic_overlap(models[a], models[b], n)
        overlaps[f"{a}|{b}"] = {
            "grid": [list(row) for row in result.grid],
            "most_shared_cell": list(result.most_shared_cell),
            "most_shared_words": list(result.most_shared_words),
            "least_shared_cell": list(result.least_shared_cell),
            "least_shared_words": list(result.least_shared_words),
        }
    if not models:
        return None, skips
    return {"preprocessing": preprocessing, "keywords": keywords, "overlap": overlaps}, skips


def _structure_section(config: PipelineConfig, labels, corpora):
    skips = []
    profiles: dict[str, structure.HashProfile] = {}
    for spec, label, corpus in zip(config.corpora, labels, corpora):
        if spec.conllu_dir is None:
            skips.append(
                {
                    "section": "structure",
                    "corpus": label,
                    "reason": "no CoNLL-U directory configured",
                }
            )
            continue
        try:
            parses = {}
            for story in corpus:
                conllu_path = spec.conllu_dir / f"{story.id}.conllu"
                if not conllu_path.exists():
                    raise FileNotFoundError(f"story {story.id!r}: missing {conllu_path}")
                parses[story.id] = conllu.parse_conllu_file(conllu_path, source_story_id=story.id)
            profiles[label] = structure.corpus_hash_profile(
                corpus, parses, iterations=config.wl_iterations
            )
        except (OSError, FileNotFoundError, ConlluParseError, ValueError, KeyError) as exc:
            skips.append({"section": "structure", "corpus": label, "reason": str(exc)})
    if not profiles:
        return None, skips

    section = {
        "profiles": {
            label: {
                "distinct_hashes": len(profiles[label].hash_multiplicity),
                "sentence_count": profiles[label].sentence_count,
            }
            for label in labels
            if label in profiles
        }
    }
    overlaps = {}
    for a, b in combinations(labels, 2):
        if a not in profiles or b not in profiles:
            continue
        jaccard = structure.structural_overlap(profiles[a], profiles[b])
        a_in_b, b_in_a = structure.directional_overlaps(profiles[a], profiles[b])
        overlaps[f"{a}|{b}"] = {
            "jaccard_pct": jaccard,
            "shared_over_a_pct": a_in_b,
            "shared_over_b_pct": b_in_a,
        }
    section["overlap"] = overlaps
    return section, skips


def emit(report: ComparisonReport, format: str, out: str | Path) -> list[Path]:
    """Write the report as a JSON document or a CSV bundle; returns paths."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if format == "json":
        path = out / "report.json"
        _write_text(path, json.dumps(report.to_dict(), indent=2) + "\n")
        return [path]
    if format == "csv_bundle":
        return _emit_csv_bundle(report, out)
    raise ValueError(f"unknown report format {format!r}")


def _write_text(path: Path, content: str) -> None:
    try:
        path.write_text(content, encoding="utf-8", newline="")
    except OSError as exc:
        raise StorymetricsError(f"cannot write {path}: {exc}") from exc


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit_csv_bundle(report: ComparisonReport, out: Path) -> list[Path]:
    paths = []
    sections = report.sections
    summary_cols = ["n", "min", "q1", "median", "q3", "max", "outlier_count"]

    rows = []
    for label, summary in sections.get("sentence_length", {}).items():
        rows.append([label] + [summary[c] for c in summary_cols])
    paths.append(out / "sentence_length.csv")
    _write_text(paths[-1], _csv_text(["corpus"] + summary_cols, rows))

    rows = []
    for label, entry in sections.get("readability", {}).items():
        rows.append([label, "raw"] + [entry["raw"][c] for c in summary_cols])
        if entry["in_range"] is not None:
            rows.append([label, "in_range"] + [entry["in_range"][c] for c in summary_cols])
        else:
            rows.append([label, "in_range", 0] + [""] * (len(summary_cols) - 1))
    paths.append(out / "readability.csv")
    _write_text(paths[-1], _csv_text(["corpus", "variant"] + summary_cols, rows))

    rows = []
    for label, per_category in sections.get("toxicity", {}).items():
        for cat in toxicity.CATEGORIES:
            if cat not in per_category:
                continue
            for i, pct in enumerate(per_category[cat]["bins"]):
                rows.append([label, cat, f"{i / 10:.1f}", f"{(i + 1) / 10:.1f}", repr(pct)])
    paths.append(out / "toxicity.csv")
    _write_text(paths[-1], _csv_text(["corpus", "category", "bin_low", "bin_high", "percent"], rows))

    rows = []
    topics_section = sections.get("topics") or {}
    for pair, entry in (topics_section.get("overlap") or {}).items():
        a, b = pair.split("|", 1)
        for i, grid_row in enumerate(entry["grid"]):
            for j, value in enumerate(grid_row):
                rows.append([a, b, i, j, repr(value)])
    paths.append(out / "topics.csv")
    _write_text(
        paths[-1], _csv_text(["corpus_a", "corpus_b", "topic_a", "topic_b", "jaccard"], rows)
    )

    structure_section = sections.get("structure") or {}
    profiled = [label for label in report.corpora if label in structure_section.get("profiles", {})]
    matrix_rows = []
    overlap = structure_section.get("overlap", {})

    def cell(a: str, b: str) -> str:
        if a == b:
            return "100.0"
        key = f"{a}|{b}" if f"{a}|{b}" in overlap else f"{b}|{a}"
        return repr(overlap[key]["jaccard_pct"]) if key in overlap else ""

    for a in profiled:
        matrix_rows.append([a] + [cell(a, b) for b in profiled])
    paths.append(out / "structural_overlap.csv")
    _write_text(paths[-1], _csv_text(["corpus"] + profiled, matrix_rows))

    rows = [[s["section"], s["corpus"], s["reason"]] for s in report.skips]
    paths.append(out / "skips.csv")
    _write_text(paths[-1], _csv_text(["section", "corpus", "reason"], rows))
    return paths
