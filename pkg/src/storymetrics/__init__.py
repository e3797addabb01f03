"""Corpus comparison toolkit for human- and machine-written stories.

Measures readability, toxicity, topic mixtures, and dependency-tree
structure across story corpora, and reports how much two corpora overlap
on each axis.
"""

from .conllu import ConlluSentence, ConlluToken, parse_conllu, parse_conllu_file, serialize_conllu
from .corpus import Corpus, Story, load_corpus, segment_sentences, tokenize
from .errors import (
    ConfigError,
    ConlluParseError,
    CorpusLoadError,
    CorpusValidationError,
    GenerationError,
    PreprocessError,
    RemoteScorerError,
    ScorerProtocolError,
    StorymetricsError,
)
from .genharness import GeneratedStory, GenerationConfig, build_prompt, generate_corpus
from .report import ComparisonReport, emit, load_config, run_pipeline
from .structure import DependencyGraph, HashProfile, graph_from_conllu, structural_overlap, wl_hash
from .textstats import (
    DistributionSummary,
    DocumentStats,
    count_syllables,
    document_stats,
    fres,
    fres_in_range,
    sentence_length_summary,
    summarize_distribution,
)
from .topics import TopicModel, fit_lda, preprocess, top_keywords, topic_overlap
from .toxicity import (
    ToxicityHistogram,
    ToxicityLexicon,
    ToxicityScores,
    bin_scores,
    score_sentence_lexicon,
    score_sentences_remote,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "ConfigError",
    "ConlluParseError",
    "ConlluSentence",
    "ConlluToken",
    "Corpus",
    "CorpusLoadError",
    "CorpusValidationError",
    "DependencyGraph",
    "DistributionSummary",
    "DocumentStats",
    "GeneratedStory",
    "GenerationConfig",
    "GenerationError",
    "HashProfile",
    "PreprocessError",
    "RemoteScorerError",
    "ScorerProtocolError",
    "Story",
    "StorymetricsError",
    "TopicModel",
    "ToxicityHistogram",
    "ToxicityLexicon",
    "ToxicityScores",
    "bin_scores",
    "build_prompt",
    "count_syllables",
    "document_stats",
    "emit",
    "fit_lda",
    "fres",
    "fres_in_range",
    "generate_corpus",
    "graph_from_conllu",
    "load_config",
    "load_corpus",
    "parse_conllu",
    "parse_conllu_file",
    "preprocess",
    "run_pipeline",
    "score_sentence_lexicon",
    "score_sentences_remote",
    "segment_sentences",
    "sentence_length_summary",
    "serialize_conllu",
    "structural_overlap",
    "summarize_distribution",
    "tokenize",
    "top_keywords",
    "topic_overlap",
    "wl_hash",
]
