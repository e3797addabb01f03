"""Command-line interface.

Exit codes: 0 on success, 1 on a fatal configuration or input error, and 2
when the run completed but one or more analyses were skipped.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import conllu, genharness, report, structure, topics
from .corpus import load_corpus
from .errors import StorymetricsError

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_SKIPS = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storymetrics",
        description="Compare story corpora: readability, toxicity, topics, structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the comparison pipeline over configured corpora")
    analyze.add_argument("--config", required=True, help="pipeline config (YAML)")
    analyze.add_argument("--out", required=True, help="output directory")
    analyze.add_argument(
        "--format", choices=("json", "csv_bundle"), default="json", help="report format"
    )
    analyze.add_argument("--seed", type=int, default=None, help="override the config seed")

    generate = sub.add_parser("generate", help="sample stories from a completion endpoint")
    generate.add_argument("--config", required=True, help="pipeline config (YAML)")
    generate.add_argument("--out", required=True, help="output directory")
    generate.add_argument("--seed", type=int, default=None, help="unused; kept for symmetry")

    hash_cmd = sub.add_parser("hash", help="write per-corpus dependency-graph hash profiles")
    hash_cmd.add_argument("--config", required=True, help="pipeline config (YAML)")
    hash_cmd.add_argument("--out", required=True, help="output directory")

    topics_cmd = sub.add_parser("topics", help="fit and dump per-corpus topic models")
    topics_cmd.add_argument("--config", required=True, help="pipeline config (YAML)")
    topics_cmd.add_argument("--out", required=True, help="output directory")
    topics_cmd.add_argument("--seed", type=int, default=None, help="override the config seed")

    validate = sub.add_parser("validate-conllu", help="parse a CoNLL-U file and report errors")
    validate.add_argument("path", help="file to validate, or '-' for stdin")
    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    result = report.run_pipeline(args.config, seed=args.seed)
    paths = report.emit(result, args.format, args.out)
    for path in paths:
        print(path)
    for skip in result.skips:
        print(
            f"skipped {skip['section']} for {skip['corpus']}: {skip['reason']}",
            file=sys.stderr,
        )
    return EXIT_SKIPS if result.skips else EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    config = report.load_config(args.config)
    gen = config.generation
    if not gen:
        raise StorymetricsError("config has no 'generation' section")
    for key in ("manifest", "endpoint", "model_name"):
        if key not in gen:
            raise StorymetricsError(f"generation config needs {key!r}")
    base = Path(args.config).parent
    sources = load_corpus(base / str(gen["manifest"]))
    endpoint = os.environ.get(report.COMPLETION_ENDPOINT_ENV, str(gen["endpoint"]))
    gen_config = genharness.GenerationConfig(
        endpoint=endpoint,
        model_name=str(gen["model_name"]),
        top_k=int(gen.get("top_k", 100)),
        samples_per_prompt=int(gen.get("samples_per_prompt", 5)),
        max_new_tokens=int(gen.get("max_new_tokens", 512)),
        temperature=float(gen.get("temperature", 1.0)),
    )
    modes = gen.get("modes") or [gen.get("mode", "template_T2")]
    out = Path(args.out)
    for mode in modes:
        stories = genharness.generate_corpus(sources, str(mode), gen_config)
        label = f"{gen_config.model_name}-{mode}"
        manifest = genharness.export_generated(stories, out / str(mode), label=label)
        print(manifest)
    return EXIT_OK


def _cmd_hash(args: argparse.Namespace) -> int:
    config = report.load_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    skipped = False
    for spec in config.corpora:
        if spec.conllu_dir is None:
            print(f"skipped {spec.label}: no CoNLL-U directory configured", file=sys.stderr)
            skipped = True
            continue
        corpus = load_corpus(spec.manifest)
        parses = {
            story.id: conllu.parse_conllu_file(
                spec.conllu_dir / f"{story.id}.conllu", source_story_id=story.id
            )
            for story in corpus
        }
        profile = structure.corpus_hash_profile(corpus, parses, iterations=config.wl_iterations)
        path = out / f"{spec.label}.hashes.tsv"
        structure.dump_profile(profile, path)
        print(path)
    return EXIT_SKIPS if skipped else EXIT_OK


def _cmd_topics(args: argparse.Namespace) -> int:
    config = report.load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    stopwords = (
        topics.load_term_file(config.stopwords_path)
        if config.stopwords_path
        else report.default_stopwords()
    )
    names = (
        topics.load_term_file(config.names_path)
        if config.names_path
        else report.default_names()
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for spec in config.corpora:
        corpus = load_corpus(spec.manifest)
        docs = topics.preprocess(corpus, stopwords, names)
        model = topics.fit_lda(
            docs,
            k=config.topics_k,
            alpha=config.topics_alpha,
            beta=config.topics_beta,
            iterations=config.topics_iterations,
            seed=config.seed,
        )
        path = out / f"{spec.label}.lda.tsv"
        topics.dump_model(model, path)
        print(path)
        keywords_path = out / f"{spec.label}.keywords.txt"
        top_n = min(config.topics_top_n, len(model.vocabulary))
        lines = [
            " ".join(topics.top_keywords(model, t, top_n)) for t in range(model.k)
        ]
        keywords_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(keywords_path)
    return EXIT_OK


def _cmd_validate_conllu(args: argparse.Namespace) -> int:
    if args.path == "-":
        sentences = conllu.parse_conllu(sys.stdin)
    else:
        sentences = conllu.parse_conllu_file(args.path)
    print(f"ok: {len(sentences)} sentences")
    return EXIT_OK


_COMMANDS = {
    "analyze": _cmd_analyze,
    "generate": _cmd_generate,
    "hash": _cmd_hash,
    "topics": _cmd_topics,
    "validate-conllu": _cmd_validate_conllu,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StorymetricsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
