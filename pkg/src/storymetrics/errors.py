"""Exception types shared across the package."""


class StorymetricsError(Exception):
    """Base class for all package-specific errors."""


class CorpusLoadError(StorymetricsError):
    """A story file or manifest could not be read."""


class CorpusValidationError(StorymetricsError):
    """A manifest or corpus violates a structural invariant."""


class ConlluParseError(StorymetricsError):
    """Malformed CoNLL-U input; message carries the offending line number."""


class PreprocessError(StorymetricsError):
    """Topic-model preprocessing left nothing to model."""


class RemoteScorerError(StorymetricsError):
    """The toxicity scoring service could not be reached or failed."""


class ScorerProtocolError(StorymetricsError):
    """The toxicity scoring service replied outside its wire contract."""


class GenerationError(StorymetricsError):
    """The completion endpoint failed after the configured retries."""


class ConfigError(StorymetricsError):
    """The pipeline configuration file is unreadable or invalid."""
