"""Prompt construction and story generation against a completion endpoint.

Prompts come in two families: context truncations of a source story (its
first sentence, or its first 256/512 whitespace tokens) and fixed
instruction templates T1-T4, two of which take the source story's title.
The completion endpoint speaks a minimal JSON contract: request
{prompt, top_k, temperature, max_new_tokens}, response {text}.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import requests
import yaml

from .corpus import Corpus, Story, segment_sentences, warn
from .errors import GenerationError

TRUNCATION_MODES = ("first_line", "first_256", "first_512")
TEMPLATE_MODES = ("template_T1", "template_T2", "template_T3", "template_T4")
MODES = TRUNCATION_MODES + TEMPLATE_MODES

_PREAMBLE_WITH_INPUT = (
    "Below is an instruction that describes a task, paired with an input that provides further context.\n"
    "Write a response that appropriately completes the request.\n"
)
_PREAMBLE_NO_INPUT = (
    "Below is an instruction that describes a task. "
    "Write a response that appropriately completes the request.\n"
)


def _with_input(instruction: str) -> str:
    return (
        _PREAMBLE_WITH_INPUT
        + "\n### Instruction:\n"
        + instruction
        + "\n\n### Input:\n{TITLE}\n\n### Response:\n"
    )


def _no_input(instruction: str) -> str:
    return _PREAMBLE_NO_INPUT + "\n### Instruction:\n" + instruction + "\n\n### Response:\n"


TEMPLATES = {
    "template_T1": _with_input("Write a short children's story given the title."),
    "template_T2": _no_input("Write a short children's story."),
    "template_T3": _with_input("Write a children's story given the title."),
    "template_T4": _no_input("Write a children's story."),
}


@dataclass(frozen=True)
class PromptSpec:
    source_story_id: str
    mode: str
    rendered_prompt: str


@dataclass(frozen=True)
class GenerationConfig:
    endpoint: str
    model_name: str
    top_k: int = 100
    samples_per_prompt: int = 5
    max_new_tokens: int = 512
    temperature: float = 1.0
    retries: int = 3
    retry_wait: float = 0.5
    timeout: float = 120.0

    def __post_init__(self):
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.samples_per_prompt < 1:
            raise ValueError("samples_per_prompt must be >= 1")

    def snapshot(self) -> dict:
        return {
            "endpoint": self.endpoint,
            "model_name": self.model_name,
            "top_k": self.top_k,
            "samples_per_prompt": self.samples_per_prompt,
            "max_new_tokens": self.max_new_tokens,
            "temperature": self.temperature,
        }


@dataclass(frozen=True)
class GeneratedStory(Story):
    prompt: PromptSpec = field(kw_only=True)
    sample_index: int = field(kw_only=True)
    config: GenerationConfig = field(kw_only=True)

    def __post_init__(self):
        # unlike corpus stories, a generated record may carry an empty
        # completion; everything else still has to hold
        if not self.id:
            raise ValueError("generated story id must be non-empty")
        if self.category != "generated":
            raise ValueError("generated stories must have category 'generated'")
        for key in ("model", "mode", "sample_index"):
            if key not in self.provenance:
                raise ValueError(f"generated story {self.id!r} missing provenance key {key!r}")


def build_prompt(story: Story, mode: str) -> PromptSpec:
    """Render the prompt for a source story under the given mode."""
    if mode not in MODES:
        raise ValueError(f"unknown prompt mode {mode!r}")
    if mode in TRUNCATION_MODES:
        if not story.text.strip():
            raise ValueError(f"mode {mode} needs source text (story {story.id!r})")
        if mode == "first_line":
            rendered = segment_sentences(story.text)[0]
        else:
            limit = 256 if mode == "first_256" else 512
            tokens = story.text.split()
            rendered = story.text.strip() if len(tokens) <= limit else " ".join(tokens[:limit])
    else:
        template = TEMPLATES[mode]
        if mode in ("template_T1", "template_T3"):
            if not story.title.strip():
                raise ValueError(f"mode {mode} needs a story title (story {story.id!r})")
            rendered = template.replace("{TITLE}", story.title)
        else:
            rendered = template
    return PromptSpec(source_story_id=story.id, mode=mode, rendered_prompt=rendered)


def _request_completion(prompt: str, config: GenerationConfig) -> str:
    payload = {
        "prompt": prompt,
        "top_k": config.top_k,
        "temperature": config.temperature,
        "max_new_tokens": config.max_new_tokens,
    }
    last_error = None
    for attempt in range(config.retries):
        try:
            resp = requests.post(config.endpoint, json=payload, timeout=config.timeout)
            if resp.status_code == 200:
                body = resp.json()
                if not isinstance(body, dict) or "text" not in body:
                    raise GenerationError(f"endpoint {config.endpoint} returned no 'text' field")
                return str(body["text"])
            last_error = f"status {resp.status_code}"
        except requests.RequestException as exc:
            last_error = str(exc)
        if attempt + 1 < config.retries and config.retry_wait > 0:
            time.sleep(config.retry_wait)
    raise GenerationError(
        f"endpoint {config.endpoint} failed after {config.retries} attempts: {last_error}"
    )


def generate(prompt: PromptSpec, config: GenerationConfig) -> list[GeneratedStory]:
    """Request samples_per_prompt completions for one prompt."""
    stories = []
    for i in range(config.samples_per_prompt):
        text = _request_completion(prompt.rendered_prompt, config)
        if not text.strip():
            warn(
                f"empty completion for story {prompt.source_story_id!r} "
                f"mode {prompt.mode} sample {i}; keeping the record"
            )
        stories.append(
            GeneratedStory(
                id=f"{prompt.source_story_id}-{prompt.mode}-{i}",
                title="",
                category="generated",
                text=text,
                provenance={
                    "model": config.model_name,
                    "mode": prompt.mode,
                    "sample_index": str(i),
                    "source_story_id": prompt.source_story_id,
                },
                prompt=prompt,
                sample_index=i,
                config=config,
            )
        )
    return stories


def generate_corpus(
    sources: Corpus, mode: str, config: GenerationConfig
) -> list[GeneratedStory]:
    """Generate for every source story under one mode.

    S sources with samples_per_prompt=n yield exactly S*n records.
    """
    out: list[GeneratedStory] = []
    for story in sources:
        out.extend(generate(build_prompt(story, mode), config))
    return out


def export_generated(
    stories: list[GeneratedStory], out: str | Path, label: str = "generated"
) -> Path:
    """Write story texts plus a manifest loadable by load_corpus."""
    out = Path(out)
    texts_dir = out / "texts"
    texts_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for story in stories:
        filename = f"{story.id}.txt"
        try:
            (texts_dir / filename).write_text(story.text, encoding="utf-8")
        except OSError as exc:
            raise GenerationError(f"cannot write {texts_dir / filename}: {exc}") from exc
        entries.append(
            {
                "id": story.id,
                "title": story.title,
                "category": "generated",
                "file": f"texts/{filename}",
                "provenance": dict(story.provenance),
            }
        )
    manifest = out / "manifest.yaml"
    data = {"label": label, "stories": entries}
    try:
        manifest.write_text(
            yaml.safe_dump(data, sort_keys=False, allow_unicode=True), encoding="utf-8"
        )
    except OSError as exc:
        raise GenerationError(f"cannot write {manifest}: {exc}") from exc
    return manifest
