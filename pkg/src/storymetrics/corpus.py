"""Story corpora: loading, validation, sentence segmentation, tokenization.

A corpus is described by a YAML manifest::

    label: old
    stories:
      - id: s1
        title: The Fox
        category: old
        file: texts/s1.txt
        provenance:
          source: somewhere

Story text files are UTF-8 and referenced relative to the manifest's
directory. Validation warnings go to stderr; invariant violations raise.
"""

from __future__ import annotations

import string
import sys
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import CorpusLoadError, CorpusValidationError

CATEGORIES = ("old", "modern", "generated")

# Words that end with a period without ending a sentence.
DEFAULT_ABBREVIATIONS = frozenset({"mr.", "mrs.", "dr.", "st."})

# Stripped from token edges only; internal apostrophes/hyphens survive.
_EDGE_PUNCT = string.punctuation + "‘’“”«»–—…"


@dataclass(frozen=True)
class Story:
    id: str
    title: str
    category: str
    text: str
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise CorpusValidationError("story id must be non-empty")
        if self.category not in CATEGORIES:
            raise CorpusValidationError(
                f"story {self.id!r}: unknown category {self.category!r} "
                f"(expected one of {', '.join(CATEGORIES)})"
            )
        if not self.text.strip():
            raise CorpusValidationError(f"story {self.id!r}: text is empty")
        if self.category == "generated" and "model" not in self.provenance:
            raise CorpusValidationError(
                f"story {self.id!r}: generated stories need a 'model' provenance key"
            )


@dataclass(frozen=True)
class Corpus:
    label: str
    stories: tuple[Story, ...]

    def __post_init__(self):
        if not self.label:
            raise CorpusValidationError("corpus label must be non-empty")
        seen = set()
        for story in self.stories:
            if story.id in seen:
                raise CorpusValidationError(f"duplicate story id {story.id!r}")
            seen.add(story.id)

    def __len__(self):
        return len(self.stories)

    def __iter__(self):
        return iter(self.stories)


def load_corpus(manifest: str | Path) -> Corpus:
    """Load a corpus from a YAML manifest, preserving story order."""
    manifest = Path(manifest)
    try:
        raw = manifest.read_bytes()
    except OSError as exc:
        raise CorpusLoadError(f"cannot read manifest {manifest}: {exc}") from exc
    try:
        data = yaml.safe_load(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise CorpusLoadError(f"manifest {manifest} is not UTF-8: {exc}") from exc
    except yaml.YAMLError as exc:
        raise CorpusLoadError(f"manifest {manifest} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict) or "label" not in data or "stories" not in data:
        raise CorpusValidationError(f"manifest {manifest} needs 'label' and 'stories' keys")

    stories = []
    for entry in data["stories"] or []:
        if not isinstance(entry, dict) or "id" not in entry:
            raise CorpusValidationError(f"manifest {manifest}: story entries need an 'id'")
        if "file" not in entry:
            raise CorpusValidationError(f"story {entry['id']!r}: missing 'file' entry")
        path = manifest.parent / str(entry["file"])
        try:
            blob = path.read_bytes()
        except OSError as exc:
            raise CorpusLoadError(f"story {entry['id']!r}: cannot read {path}: {exc}") from exc
        try:
            text = blob.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusLoadError(f"story {entry['id']!r}: {path} is not UTF-8: {exc}") from exc
        provenance = {str(k): str(v) for k, v in (entry.get("provenance") or {}).items()}
        stories.append(
            Story(
                id=str(entry["id"]),
                title=str(entry.get("title", "")),
                category=str(entry.get("category", "")),
                text=text,
                provenance=provenance,
            )
        )
    return Corpus(label=str(data["label"]), stories=tuple(stories))


def segment_sentences(text: str, abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS) -> list[str]:
    """Split text into sentences on . ! ? followed by whitespace and a capital.

    A terminal-punctuation run does not split when the word it ends is in
    ``abbreviations`` (compared lowercase, punctuation included). Every
    non-whitespace character of the input lands in exactly one segment.
    """
    if not text.strip():
        return []
    segments = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in ".!?":
            run_end = i + 1
            while run_end < n and text[run_end] in ".!?":
                run_end += 1
            # require whitespace, then an uppercase letter
            j = run_end
            while j < n and text[j].isspace():
                j += 1
            if j > run_end and j < n and text[j].isupper():
                word_start = run_end
                while word_start > 0 and not text[word_start - 1].isspace():
                    word_start -= 1
                word = text[word_start:run_end].lower()
                if word not in abbreviations:
                    seg = text[start:run_end].strip()
                    if seg:
                        segments.append(seg)
                    start = j
            i = run_end
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        segments.append(tail)
    return segments


def tokenize(sentence: str) -> list[str]:
    """Whitespace-split, then strip edge punctuation; empty results are dropped."""
    tokens = []
    for raw in sentence.split():
        tok = raw.strip(_EDGE_PUNCT)
        if tok:
            tokens.append(tok)
    return tokens


def warn(message: str) -> None:
    """Line-oriented validation warning on stderr."""
    print(f"warning: {message}", file=sys.stderr)
