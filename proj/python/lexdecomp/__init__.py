"""Sentence similarity by decomposing and composing lexical semantics."""

from ._core import (
    EmbeddingStore,
    LexdecompError,
    Model,
    ModelConfig,
    accuracy_f1,
    analyze_pair,
    cosine,
    dot,
    load_checkpoint,
    loss,
    map_mrr,
    save_checkpoint,
    score,
    train,
)

__all__ = [
    "EmbeddingStore",
    "LexdecompError",
    "Model",
    "ModelConfig",
    "accuracy_f1",
    "analyze_pair",
    "cosine",
    "dot",
    "load_checkpoint",
    "loss",
    "map_mrr",
    "save_checkpoint",
    "score",
    "train",
]

__version__ = "0.1.0"
