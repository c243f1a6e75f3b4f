"""A faceted biographical knowledge-graph engine: triple store, Turtle and
N-Triples I/O, schema indexing and validation, rule-based materialization,
spreadsheet mapping rules, and a SPARQL-subset query engine."""

from .inference import check_consistency, materialize, types_of
from .query import evaluate, parse_query, to_results_json, to_text_table
from .schema import compute_metrics, extract_schema, validate
from .sheetmap import apply, load_workbook, parse_rules
from .store import GraphStore, PrefixMap
from .terms import BlankNode, Iri, Literal, Triple
from .turtle import load_turtle, parse_ntriples, serialize_ntriples, serialize_turtle

__version__ = "0.1.0"

__all__ = [
    "BlankNode", "GraphStore", "Iri", "Literal", "PrefixMap", "Triple",
    "apply", "check_consistency", "compute_metrics", "evaluate", "extract_schema",
    "load_turtle", "load_workbook", "materialize", "parse_ntriples", "parse_query",
    "parse_rules", "serialize_ntriples", "serialize_turtle", "to_results_json",
    "to_text_table", "types_of", "validate",
]
