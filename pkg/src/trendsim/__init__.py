"""trendsim: daily mean similarity scores for a tweet corpus.

Measures, per day, how semantically close a corpus is to a set of target
words, using cosine similarity over word or sentence embeddings, and emits
CSV time series, SVG trend plots, a target-similarity heatmap, and a
two-window spike report.
"""

from .backends import (
    CachingBackend,
    EmbedResult,
    Lexicon,
    LexiconBackend,
    RemoteBackend,
    load_lexicon,
)
from .cleaning import CleanText, RemovalCounts, clean_text
from .config import RunConfig
from .errors import BackendError, ConfigError, InputError, TrendsimError
from .pipeline import RunResult, run_pipeline
from .report import EventMarker, SpikeReport, spike_report
from .scoring import (
    DailyScore,
    SimilarityMatrix,
    TargetWord,
    cosine,
    dmss_sentence,
    dmss_word,
    target_similarity_matrix,
)
from .synth import ClusterSpec, SynthSpec, generate_corpus, generate_lexicon

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "CachingBackend",
    "CleanText",
    "ClusterSpec",
    "ConfigError",
    "DailyScore",
    "EmbedResult",
    "EventMarker",
    "InputError",
    "Lexicon",
    "LexiconBackend",
    "RemovalCounts",
    "RemoteBackend",
    "RunConfig",
    "RunResult",
    "SimilarityMatrix",
    "SpikeReport",
    "SynthSpec",
    "TargetWord",
    "TrendsimError",
    "__version__",
    "clean_text",
    "cosine",
    "dmss_sentence",
    "dmss_word",
    "generate_corpus",
    "generate_lexicon",
    "load_lexicon",
    "run_pipeline",
    "spike_report",
    "target_similarity_matrix",
]
