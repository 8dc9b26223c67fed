"""symbiosis-kit: a toolchain for goal-driven security measurement programs.

Parse .sym model files, validate them against a fixed rule set, render
natural-language formulations, evaluate metrics over measurement logs,
generate deterministic reports, and analyze the impact of model changes.
"""

from .diagnostics import Diagnostic, Severity, SourceSpan
from .evaluator import EvaluationError, MissingBinding, classify, evaluate
from .formulation import render_formulation
from .graph import TraceabilityGraph, ancestors, build_graph, descendants
from .impact import Change, ChangeKind, ImpactReport, analyze, diff, impact
from .model import Model, canonical_dump
from .parser import parse, parse_expression, parse_file
from .pipeline import (
    ActionDirective,
    EvaluationResult,
    aggregate,
    evaluate_period,
    ingest,
    route_actions,
    route_result,
)
from .report import generate_report
from .serializer import serialize
from .validator import validate

__version__ = "0.1.0"

__all__ = [
    "ActionDirective",
    "Change",
    "ChangeKind",
    "Diagnostic",
    "EvaluationError",
    "EvaluationResult",
    "ImpactReport",
    "MissingBinding",
    "Model",
    "Severity",
    "SourceSpan",
    "TraceabilityGraph",
    "aggregate",
    "analyze",
    "ancestors",
    "build_graph",
    "canonical_dump",
    "classify",
    "descendants",
    "diff",
    "evaluate",
    "evaluate_period",
    "generate_report",
    "impact",
    "ingest",
    "parse",
    "parse_expression",
    "parse_file",
    "render_formulation",
    "route_actions",
    "route_result",
    "serialize",
    "validate",
    "__version__",
]
