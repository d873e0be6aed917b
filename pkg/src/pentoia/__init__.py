"""Pentomino boards with Incremental Algorithm referring expressions."""

__version__ = "0.1.0"

from .core import (
    DEFAULT_ORDER,
    ExpressionType,
    PreferenceOrder,
    SymbolicBoard,
    SymbolicPiece,
    enumerate_symbol_space,
    shares_property,
)
from .ia import DistinguishingSet, classify_expression_type, incremental_algorithm, run_ia
from .realize import enumerate_expressions, parse, realize

__all__ = [
    "DEFAULT_ORDER",
    "DistinguishingSet",
    "ExpressionType",
    "PreferenceOrder",
    "SymbolicBoard",
    "SymbolicPiece",
    "classify_expression_type",
    "enumerate_expressions",
    "enumerate_symbol_space",
    "incremental_algorithm",
    "parse",
    "realize",
    "run_ia",
    "shares_property",
]
