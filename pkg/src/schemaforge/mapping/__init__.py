"""Mapping-expression language: parser, syntax validator, and evaluator.

The grammar and semantics of the supported subset are documented in
docs/mapping-grammar.md; expression source files use the .jnt extension.
"""

from .errors import (
    MappingError,
    MappingEvalError,
    MappingRuntimeError,
    MappingSyntaxError,
    MappingTypeError,
    line_col,
)
from .evaluator import EvalLimits, evaluate_mapping
from .functions import registered_functions
from .nodes import MappingAst
from .parser import parse_mapping
from .syntax import SyntaxReport, validate_syntax

__all__ = [
    "EvalLimits",
    "MappingAst",
    "MappingError",
    "MappingEvalError",
    "MappingRuntimeError",
    "MappingSyntaxError",
    "MappingTypeError",
    "SyntaxReport",
    "evaluate_mapping",
    "line_col",
    "parse_mapping",
    "registered_functions",
    "validate_syntax",
]
