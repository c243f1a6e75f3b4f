"""Slow, obviously-correct reference implementations used to check the engine.

Nothing here calls the code under test except for term constructors and the
N-Triples text the engine's serializer produced.
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from decimal import Decimal

from rkg.terms import (
    OWL, RDF, RDFS, Iri, Literal, NUMERIC_DATATYPES, Triple,
)

RDF_TYPE = Iri(RDF + "type")
SUBCLASS = Iri(RDFS + "subClassOf")
SUBPROP = Iri(RDFS + "subPropertyOf")
DOMAIN = Iri(RDFS + "domain")
RANGE = Iri(RDFS + "range")
INVERSE = Iri(OWL + "inverseOf")
OBJECT_PROPERTY = Iri(OWL + "ObjectProperty")


# -- (a) pattern matching ----------------------------------------------------

def linear_match(triples, s=None, p=None, o=None):
    return {t for t in triples
            if (s is None or t.subject == s) and (p is None or t.predicate == p)
            and (o is None or t.object == o)}


# -- (b) naive RDFS-plus fixpoint --------------------------------------------

def naive_closure(triples) -> set[Triple]:
    """Apply every rule to every triple, reading the vocabulary afresh from the
    current triple set each round, until nothing changes."""
    g = set(triples)
    while True:
        sc = {(t.subject, t.object) for t in g if t.predicate == SUBCLASS}
        sp = {(t.subject, t.object) for t in g if t.predicate == SUBPROP}
        dom = {(t.subject, t.object) for t in g if t.predicate == DOMAIN}
        rng = {(t.subject, t.object) for t in g if t.predicate == RANGE}
        inv = {(t.subject, t.object) for t in g if t.predicate == INVERSE}
        inv |= {(b, a) for a, b in inv}
        obj = {t.subject for t in g if t.predicate == RDF_TYPE and t.object == OBJECT_PROPERTY}
        new = set()
        for a, b in sc:
            for b2, c in sc:
                if b == b2:
                    new.add(Triple(a, SUBCLASS, c))
        for t in g:
            s, p, o = t
            if p == RDF_TYPE:
                new |= {Triple(s, RDF_TYPE, d) for c, d in sc if c == o}
            new |= {Triple(s, q, o) for p2, q in sp if p2 == p}
            new |= {Triple(s, RDF_TYPE, c) for p2, c in dom if p2 == p}
            if isinstance(o, Literal):
                continue
            if p in obj:
                new |= {Triple(o, RDF_TYPE, c) for p2, c in rng if p2 == p}
            new |= {Triple(o, q, s) for p2, q in inv if p2 == p}
        if new <= g:
            return g
        g |= new


# -- (c) exhaustive query evaluation -----------------------------------------
#
# Queries are small nested tuples:
#   group  := ("group", [element, ...])
#   element:= ("tp", s, p, o) | ("opt", group) | ("union", group, group)
#           | ("filter", expr)
#   expr   := ("bound", var) | (op, a, b) for op in = != < > | ("not", e)
#           | ("and", e, e) | ("or", e, e)
# Variables are strings starting with "?"; constants are Terms.

def _is_var(x):
    return isinstance(x, str) and x.startswith("?")


def _numeric(t):
    if not isinstance(t, Literal):
        return None
    if t.datatype in NUMERIC_DATATYPES or re.fullmatch(r"[+-]?(\d+(\.\d*)?|\.\d+)", t.lexical.strip()):
        try:
            return Decimal(t.lexical.strip())
        except Exception:
            return None
    return None


def eval_expr(e, mu):
    """True, False, or None for an error."""
    tag = e[0]
    if tag == "bound":
        return e[1] in mu
    if tag == "not":
        v = eval_expr(e[1], mu)
        return None if v is None else not v
    if tag in ("and", "or"):
        a, b = eval_expr(e[1], mu), eval_expr(e[2], mu)
        if tag == "and":
            if a is False or b is False:
                return False
            return None if None in (a, b) else True
        if a is True or b is True:
            return True
        return None if None in (a, b) else False
    x = mu.get(e[1]) if _is_var(e[1]) else e[1]
    y = mu.get(e[2]) if _is_var(e[2]) else e[2]
    if x is None or y is None:
        return None
    nx, ny = _numeric(x), _numeric(y)
    if nx is not None and ny is not None:
        x, y = nx, ny
    elif tag in ("=", "!="):
        return (x == y) == (tag == "=")
    elif isinstance(x, Literal) and isinstance(y, Literal):
        x, y = x.lexical, y.lexical
    else:
        return None
    return {"=": x == y, "!=": x != y, "<": x < y, ">": x > y}[tag]


def _compatible(a, b):
    return all(b[k] == v for k, v in a.items() if k in b)


def _bgp(patterns, triples):
    """Every assignment of the patterns' variables that makes each instantiated
    pattern a stored triple, found by scanning the whole triple set per pattern."""
    out = []

    def extend(i, mu):
        if i == len(patterns):
            out.append(mu)
            return
        for t in triples:
            m = dict(mu)
            for x, v in zip(patterns[i], t):
                if _is_var(x):
                    if m.setdefault(x, v) != v:
                        break
                elif x != v:
                    break
            else:
                extend(i + 1, m)

    extend(0, {})
    return out


def eval_group(group, triples):
    elements = group[1]
    omega = [{}]
    bgp, filters = [], []

    def flush(om):
        if not bgp:
            return om
        right = _bgp(bgp, triples)
        bgp.clear()
        return [{**a, **b} for a in om for b in right if _compatible(a, b)]

    for el in elements:
        if el[0] == "tp":
            bgp.append(el[1:])
            continue
        if el[0] == "filter":
            filters.append(el[1])
            continue
        omega = flush(omega)
        if el[0] == "opt":
            inner = ("group", [x for x in el[1][1] if x[0] != "filter"])
            cond = [x[1] for x in el[1][1] if x[0] == "filter"]
            right = eval_group(inner, triples)
            out = []
            for a in omega:
                ext = [{**a, **b} for b in right if _compatible(a, b)]
                ext = [m for m in ext if all(eval_expr(c, m) is True for c in cond)]
                out.extend(ext or [a])
            omega = out
        elif el[0] == "union":
            right = eval_group(el[1], triples) + eval_group(el[2], triples)
            omega = [{**a, **b} for a in omega for b in right if _compatible(a, b)]
        else:  # nested group
            right = eval_group(el, triples)
            omega = [{**a, **b} for a in omega for b in right if _compatible(a, b)]
    omega = flush(omega)
    return [m for m in omega if all(eval_expr(f, m) is True for f in filters)]


def brute_force(group, triples, header) -> Counter:
    """Result bag of SELECT header WHERE group, as a Counter of row tuples."""
    triples = {tuple(t) for t in triples}
    rows = [tuple(m.get("?" + h) for h in header)
            for m in eval_group(group, triples) if m]
    return Counter(rows)


# -- counting scripts ----------------------------------------------------------

_NT = re.compile(r"^(\S+) (\S+) (.+) \.$")


def count_metrics(schema_nt: str, data_nt: str) -> dict[str, int]:
    """Fig.-13-style counts computed from N-Triples text with string operations."""
    def lines(text):
        return [_NT.match(l).groups() for l in text.splitlines() if l.strip()]

    schema_and_data = lines(schema_nt) + lines(data_nt)
    typ = f"<{RDF}type>"
    classes, props = set(), {}
    for s, p, o in schema_and_data:
        if p == typ and o in (f"<{OWL}Class>", f"<{RDFS}Class>"):
            classes.add(s)
        if p in (f"<{RDFS}subClassOf>", f"<{OWL}disjointWith>") and o.startswith("<"):
            classes |= {s, o}
    kinds = {f"<{OWL}ObjectProperty>": "object", f"<{OWL}DatatypeProperty>": "data",
             f"<{OWL}AnnotationProperty>": "annotation"}
    for s, p, o in schema_and_data:
        if p == typ and o in kinds:
            props[s] = kinds[o]
    for s, p, o in schema_and_data:
        if p == f"<{RDFS}domain>" and o.startswith("<"):
            classes.add(o)
        if p == f"<{RDFS}range>" and props.get(s) == "object" and o.startswith("<"):
            classes.add(o)
    indiv = {s for s, p, o in lines(data_nt)
             if p == typ and o in classes and s.startswith("<") and s not in classes
             and s not in props}
    kinds_list = list(props.values())
    return {
        "classCount": len(classes),
        "objectPropertyCount": kinds_list.count("object"),
        "dataPropertyCount": kinds_list.count("data"),
        "annotationPropertyCount": kinds_list.count("annotation"),
        "individualCount": len(indiv),
        "tripleCount": len(set(lines(data_nt))),
    }


def csv_shape(text: str) -> tuple[int, int]:
    rows = list(csv.reader(io.StringIO(text)))
    return len(rows), max((len(r) for r in rows), default=0)


def nonempty_rows(text: str, column: int, start_row: int) -> int:
    """Rows at or after start_row (1-based) whose 0-based ``column`` is non-blank."""
    rows = list(csv.reader(io.StringIO(text)))
    return sum(1 for r in rows[start_row - 1:] if len(r) > column and r[column].strip())
