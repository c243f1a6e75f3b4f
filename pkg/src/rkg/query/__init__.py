"""SPARQL-subset parsing, evaluation and result formatting."""

from .ast import Query, Var
from .evaluate import UNBOUND, QueryCancelled, SolutionTable, evaluate
from .parser import parse_query
from .results import to_results_json, to_text_table

__all__ = [
    "Query", "QueryCancelled", "Var", "UNBOUND", "SolutionTable", "evaluate", "parse_query",
    "to_results_json", "to_text_table",
]
