"""Divisors with imposed ramification on chains of loops."""
from .core import (
    ChainOfLoops,
    ClassCoords,
    LoopSpec,
    MetricDivisor,
    Partition,
    SchubertIndex,
    brill_noether_number,
    class_equal,
    coords_to_divisor,
    is_generic,
    schubert_to_partition,
    torsion_profile,
)
from .errors import ChainError, ConsistencyError, InvalidInput, ParseError, UnsupportedInput

__version__ = "0.1.0"

__all__ = [
    "ChainError",
    "ChainOfLoops",
    "ClassCoords",
    "ConsistencyError",
    "InvalidInput",
    "LoopSpec",
    "MetricDivisor",
    "ParseError",
    "Partition",
    "SchubertIndex",
    "UnsupportedInput",
    "__version__",
    "brill_noether_number",
    "class_equal",
    "coords_to_divisor",
    "is_generic",
    "schubert_to_partition",
    "torsion_profile",
]
