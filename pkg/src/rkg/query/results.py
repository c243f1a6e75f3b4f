"""SPARQL results JSON and plain-text tables."""

from __future__ import annotations

import json

from ..terms import RDF_LANGSTRING, XSD_STRING, BlankNode, Iri, Literal
from .evaluate import UNBOUND, SolutionTable

UNBOUND_CELL = "—"


def term_to_json(term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.lang is not None:
        out["xml:lang"] = term.lang
    elif term.datatype not in (XSD_STRING, RDF_LANGSTRING):
        out["datatype"] = term.datatype.value
    return out


def term_from_json(d: dict):
    kind = d["type"]
    if kind == "uri":
        return Iri(d["value"])
    if kind == "bnode":
        return BlankNode(d["value"])
    if "xml:lang" in d:
        return Literal(d["value"], lang=d["xml:lang"])
    return Literal(d["value"], Iri(d["datatype"]) if "datatype" in d else XSD_STRING)


def to_results_json(t: SolutionTable, indent: int | None = None) -> str:
    bindings = []
    for row in t.rows:
        bindings.append({var: term_to_json(v) for var, v in zip(t.header, row)
                         if v is not UNBOUND})
    doc = {"head": {"vars": list(t.header)}, "results": {"bindings": bindings}}
    return json.dumps(doc, indent=indent, ensure_ascii=False)


def _cell(term) -> str:
    if term is UNBOUND:
        return UNBOUND_CELL
    if isinstance(term, Literal):
        return term.lexical.replace("\n", " ")
    return term.n3()


def to_text_table(t: SolutionTable) -> str:
    cells = [[_cell(v) for v in row] for row in t.rows]
    widths = [len(h) for h in t.header]
    for row in cells:
        for i, c in enumerate(row):
            widths[i] = max(widths[i], len(c))
    lines = ["  ".join(h.ljust(w) for h, w in zip(t.header, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
