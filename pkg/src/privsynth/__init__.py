"""Privacy-preserving synthetic text generation and leakage evaluation.

The package covers the full loop: annotated corpus handling, entity-aware
control codes, a rule-based recognizer for the entity-unknown setting, a
small autoregressive language model with a trainable virtual-token prefix,
masked three-term prefix tuning, constrained decoding with hard bad-token
blocking, and privacy/utility metrics (PIPP, ELP, ROUGE-2/L, perplexity).
"""

__version__ = "0.1.0"

from .corpus import (
    Category,
    Document,
    EntitySpan,
    IdentifierClass,
    TokenizedDocument,
    Vocabulary,
    build_vocab,
    case_variants,
    detokenize,
    load_corpus,
    save_corpus,
    segment_document,
    tokenize,
)
from .control_code import ControlCode, FictionalPools, build_control_code, parse, render, sample_fictional
from .rng import SeededRng, derive_seed

__all__ = [
    "Category",
    "ControlCode",
    "Document",
    "EntitySpan",
    "FictionalPools",
    "IdentifierClass",
    "SeededRng",
    "TokenizedDocument",
    "Vocabulary",
    "build_control_code",
    "build_vocab",
    "case_variants",
    "derive_seed",
    "detokenize",
    "load_corpus",
    "parse",
    "render",
    "sample_fictional",
    "save_corpus",
    "segment_document",
    "tokenize",
]
