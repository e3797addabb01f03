"""CoNLL-U reading, validation, and serialization.

Ten tab-separated columns per token row, '#' comment lines, blank lines
between sentences. Multiword-range rows ("3-4") and empty-node rows ("3.1")
are recognized and dropped. Only ID, FORM, HEAD, DEPREL are interpreted;
the remaining columns are carried as opaque strings so parsed sentences
serialize back losslessly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

from .corpus import warn
from .errors import ConlluParseError

_NCOLS = 10


@dataclass(frozen=True)
class ConlluToken:
    id: int
    form: str
    head: int
    deprel: str
    lemma: str = "_"
    upos: str = "_"
    xpos: str = "_"
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"

    def to_row(self) -> str:
        return "\t".join(
            (
                str(self.id),
                self.form,
                self.lemma,
                self.upos,
                self.xpos,
                self.feats,
                str(self.head),
                self.deprel,
                self.deps,
                self.misc,
            )
        )


@dataclass(frozen=True)
class ConlluSentence:
    tokens: tuple[ConlluToken, ...]
    source_story_id: str = ""
    sentence_index: int = 0

    def __len__(self):
        return len(self.tokens)


def parse_conllu(stream: str | TextIO | Iterable[str], source_story_id: str = "") -> list[ConlluSentence]:
    """Parse CoNLL-U text into sentences, one per blank-line-delimited block."""
    if isinstance(stream, str):
        stream = stream.splitlines()
    sentences: list[ConlluSentence] = []
    block: list[ConlluToken] = []
    block_start_line = 0

    def flush():
        if block:
            sentences.append(
                _validated_sentence(tuple(block), source_story_id, len(sentences), block_start_line)
            )
            block.clear()

    for line_no, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != _NCOLS:
            raise ConlluParseError(
                f"line {line_no}: expected {_NCOLS} tab-separated columns, got {len(cols)}"
            )
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            # multiword range / empty node: present but not part of the tree
            continue
        if not block:
            block_start_line = line_no
        try:
            idx = int(tok_id)
            head = int(cols[6])
        except ValueError as exc:
            raise ConlluParseError(f"line {line_no}: non-integer id or head: {exc}") from exc
        if idx < 1:
            raise ConlluParseError(f"line {line_no}: token id must be positive, got {idx}")
        if head < 0:
            raise ConlluParseError(f"line {line_no}: head must be non-negative, got {head}")
        block.append(
            ConlluToken(
                id=idx,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=cols[5],
                head=head,
                deprel=cols[7],
                deps=cols[8],
                misc=cols[9],
            )
        )
    flush()
    return sentences


def _validated_sentence(
    tokens: tuple[ConlluToken, ...], source_story_id: str, sentence_index: int, line_no: int
) -> ConlluSentence:
    n = len(tokens)
    ids = [t.id for t in tokens]
    if ids != list(range(1, n + 1)):
        raise ConlluParseError(
            f"sentence starting at line {line_no}: token ids not contiguous 1..{n}: {ids}"
        )
    for t in tokens:
        if t.head > n:
            raise ConlluParseError(
                f"sentence starting at line {line_no}: token {t.id} has head {t.head} > {n}"
            )
    roots = sum(1 for t in tokens if t.head == 0)
    if roots != 1:
        where = f"story {source_story_id!r} " if source_story_id else ""
        warn(f"{where}sentence {sentence_index}: {roots} root tokens (expected 1)")
    return ConlluSentence(
        tokens=tokens, source_story_id=source_story_id, sentence_index=sentence_index
    )


def serialize_conllu(sentences: Iterable[ConlluSentence]) -> str:
    """Render sentences back to CoNLL-U text (comments are not retained)."""
    blocks = []
    for sent in sentences:
        blocks.append("\n".join(tok.to_row() for tok in sent.tokens))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def parse_conllu_file(path, source_story_id: str = "") -> list[ConlluSentence]:
    with open(path, encoding="utf-8") as fh:
        return parse_conllu(fh, source_story_id=source_story_id)
