"""Topic-and-context-aware sentential argument mining toolkit."""

from . import checkpoint, corpus, embeddings, experiments, kg, models, pipeline, runconfig

__version__ = "0.1.0"

__all__ = [
    "checkpoint",
    "corpus",
    "embeddings",
    "experiments",
    "kg",
    "models",
    "pipeline",
    "runconfig",
    "__version__",
]
