"""Fluence: an interpreter whose evaluation builds a dynamic dependence
graph, with @doc paragraphs attached to runtime values and slicing queries
that drive interactive literate-execution documents.
"""

from .desugar import desugar_module, desugar_term
from .document import Document, RunConfig, build_document, export_bundle
from .errors import (
    ConfigError, DesugarError, EvalError, FluenceError, LexError, ParseError,
    Span, ViewError,
)
from .evaluator import close_definitions, evaluate, evaluate_sequence, match_value
from .graph import (
    DepGraph, Selection, SliceResult, export_graph, resolve_selection,
)
from .lexer import Token, tokenize
from .loader import evaluate_program, evaluate_source, load_program
from .parser import parse_module, parse_source
from .pretty import print_module
from .values import Env, Value, list_elements, render_value, value_subtree
from .views import (
    HighlightState, ViewSpec, apply_slice, build_view, element_to_vertices,
)

__version__ = "0.1.0"
