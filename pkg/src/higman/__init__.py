"""Free groups, inverse systems of free groups, and truncated elements of
Higman's universal inverse limit."""

from .word import Letter, Word, invert, multiply, occurrences, parse_word, reduce
from .fmap import FreeMap, apply, compose, is_surjective, standard_projection
from .stallings import (
    contains,
    express_in_basis,
    fold,
    invert_bijective,
    nielsen_reduce,
    split_basis,
)
from .prolimit import Dyadic, StableElement, Truncation, embed, metric, truncate
from .endo import EndoTable, counterexample_table, evaluate, verify_counterexample
from .invsystem import SystemDescription, classify, normalize, validate

__all__ = [
    "Letter", "Word", "invert", "multiply", "occurrences", "parse_word", "reduce",
    "FreeMap", "apply", "compose", "is_surjective", "standard_projection",
    "contains", "express_in_basis", "fold", "invert_bijective", "nielsen_reduce", "split_basis",
    "Dyadic", "StableElement", "Truncation", "embed", "metric", "truncate",
    "EndoTable", "counterexample_table", "evaluate", "verify_counterexample",
    "SystemDescription", "classify", "normalize", "validate",
]
