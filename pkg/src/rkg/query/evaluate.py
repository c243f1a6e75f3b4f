"""Query evaluation with bag semantics.

Groups evaluate left to right: triple patterns join by index lookups with the
current bindings substituted in, OPTIONAL left-joins (its own FILTERs act as
the join condition), UNION branches evaluate independently and then join,
and a group's FILTERs run last over the group's solutions. Solutions that
bind no variable at all are dropped from the final result.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from functools import cmp_to_key
from typing import Iterator

from ..store import GraphStore
from ..terms import NUMERIC_DATATYPES, XSD, BlankNode, Iri, Literal
from .ast import (
    And, Bound, Compare, Filter, GroupPattern, Not, OptionalPattern, Or, Query,
    TriplePattern, UnionPattern, Var,
)

UNBOUND = None
Solution = dict  # variable name -> Term


@dataclass
class SolutionTable:
    header: list[str]
    rows: list[tuple] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> list:
        i = self.header.index(name)
        return [r[i] for r in self.rows]

    def as_dicts(self) -> list[dict]:
        return [{h: v for h, v in zip(self.header, r) if v is not UNBOUND} for r in self.rows]


class QueryCancelled(Exception):
    """Raised inside evaluate() when its cancel event is set."""


class ExprError(Exception):
    """Type error or unbound variable inside a FILTER expression."""


# -- pattern matching --------------------------------------------------------

def _subst(x, mu):
    return mu.get(x.name) if isinstance(x, Var) else x


def _bound_count(tp: TriplePattern, mu) -> int:
    return sum(1 for x in (tp.s, tp.p, tp.o) if not isinstance(x, Var) or x.name in mu)


def _match_pattern(store: GraphStore, tp: TriplePattern, mu: Solution) -> Iterator[Solution]:
    s, p, o = _subst(tp.s, mu), _subst(tp.p, mu), _subst(tp.o, mu)
    if p is not None and not isinstance(p, Iri):
        return
    if s is not None and isinstance(s, Literal):
        return
    for t in store.match(s, p, o):
        ext = dict(mu)
        ok = True
        for pos, val in ((tp.s, t.subject), (tp.p, t.predicate), (tp.o, t.object)):
            if isinstance(pos, Var):
                prev = ext.get(pos.name)
                if prev is None:
                    ext[pos.name] = val
                elif prev != val:
                    ok = False
                    break
        if ok:
            yield ext


def _extend_bgp(store, patterns: list[TriplePattern], mu, cancel=None) -> Iterator[Solution]:
    if cancel is not None and cancel.is_set():
        raise QueryCancelled()
    if not patterns:
        yield mu
        return
    # most-bound pattern first
    best = max(range(len(patterns)), key=lambda i: (_bound_count(patterns[i], mu), -i))
    rest = patterns[:best] + patterns[best + 1:]
    for ext in _match_pattern(store, patterns[best], mu):
        yield from _extend_bgp(store, rest, ext, cancel)


def _compatible(a: Solution, b: Solution) -> bool:
    if len(a) > len(b):
        a, b = b, a
    return all(b.get(k, v) == v for k, v in a.items())


def _join(left: list[Solution], right: list[Solution]) -> list[Solution]:
    return [{**m1, **m2} for m1 in left for m2 in right if _compatible(m1, m2)]


def _split_filters(group: GroupPattern):
    filters = [e.expr for e in group.elements if isinstance(e, Filter)]
    rest = GroupPattern([e for e in group.elements if not isinstance(e, Filter)])
    return rest, filters


def _passes(filters, mu) -> bool:
    return all(effective_boolean(f, mu) is True for f in filters)


def eval_group(group: GroupPattern, store: GraphStore, apply_filters: bool = True,
               cancel=None) -> list[Solution]:
    omega: list[Solution] = [{}]
    bgp: list[TriplePattern] = []
    filters = []

    def flush():
        nonlocal omega
        if bgp:
            omega = [ext for mu in omega for ext in _extend_bgp(store, bgp, mu, cancel)]
            bgp.clear()

    for e in group.elements:
        if isinstance(e, TriplePattern):
            bgp.append(e)
            continue
        if isinstance(e, Filter):
            filters.append(e.expr)
            continue
        flush()
        if isinstance(e, OptionalPattern):
            inner, cond = _split_filters(e.group)
            right = eval_group(inner, store, cancel=cancel)
            out = []
            for m1 in omega:
                ext = [m for m in ({**m1, **m2} for m2 in right if _compatible(m1, m2))
                       if _passes(cond, m)]
                out.extend(ext if ext else [m1])
            omega = out
        elif isinstance(e, UnionPattern):
            omega = _join(omega, eval_group(e.left, store, cancel=cancel)
                          + eval_group(e.right, store, cancel=cancel))
        elif isinstance(e, GroupPattern):
            omega = _join(omega, eval_group(e, store, cancel=cancel))
        else:
            raise TypeError(f"unknown group element {e!r}")
    flush()
    if apply_filters and filters:
        omega = [mu for mu in omega if _passes(filters, mu)]
    return omega


# -- expressions -------------------------------------------------------------

_DECIMAL_LEX = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)$")
_BOOLEAN = Iri(XSD + "boolean")


def numeric_value(term) -> Decimal | None:
    """Numeric value of a literal, by datatype or by decimal-looking lexical form."""
    if not isinstance(term, Literal):
        return None
    lex = term.lexical.strip()
    if term.datatype in NUMERIC_DATATYPES or _DECIMAL_LEX.match(lex):
        try:
            value = Decimal(lex)
        except InvalidOperation:
            return None
        return None if value.is_nan() else value
    return None


def _value(expr, mu):
    if isinstance(expr, Var):
        v = mu.get(expr.name)
        if v is None:
            raise ExprError(f"unbound variable ?{expr.name}")
        return v
    if isinstance(expr, (Iri, Literal, BlankNode)):
        return expr
    return Literal("true" if _ebv(expr, mu) else "false", _BOOLEAN)


def _compare(op, a, b) -> bool:
    na, nb = numeric_value(a), numeric_value(b)
    if na is not None and nb is not None:
        x, y = na, nb
    elif op in ("=", "!="):
        return (a == b) == (op == "=")
    elif isinstance(a, Literal) and isinstance(b, Literal):
        x, y = a.lexical, b.lexical
    else:
        raise ExprError(f"cannot order {a!r} and {b!r}")
    return {
        "=": x == y, "!=": x != y, "<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y,
    }[op]


def _ebv(expr, mu) -> bool:
    """Effective boolean value; raises ExprError on type errors."""
    if isinstance(expr, Bound):
        return expr.var.name in mu and mu[expr.var.name] is not None
    if isinstance(expr, Compare):
        return _compare(expr.op, _value(expr.left, mu), _value(expr.right, mu))
    if isinstance(expr, Not):
        return not _ebv(expr.expr, mu)
    if isinstance(expr, And):
        return _three_valued(expr, mu, conj=True)
    if isinstance(expr, Or):
        return _three_valued(expr, mu, conj=False)
    term = _value(expr, mu)
    if isinstance(term, Literal):
        if term.datatype == _BOOLEAN:
            return term.lexical in ("true", "1")
        num = numeric_value(term) if term.datatype in NUMERIC_DATATYPES else None
        if num is not None:
            return num != 0
        if term.datatype in NUMERIC_DATATYPES:
            return False
        return term.lexical != ""
    raise ExprError(f"no boolean value for {term!r}")


def _three_valued(expr, mu, conj: bool) -> bool:
    results = []
    for side in (expr.left, expr.right):
        try:
            results.append(_ebv(side, mu))
        except ExprError:
            results.append(None)
    decisive = (False if conj else True)
    if decisive in results:
        return decisive
    if None in results:
        raise ExprError("error operand")
    return not decisive


def effective_boolean(expr, mu) -> bool | None:
    """True/False, or None when the expression errors (the row is dropped)."""
    try:
        return _ebv(expr, mu)
    except ExprError:
        return None


# -- ordering ----------------------------------------------------------------

def _category(t) -> int:
    if isinstance(t, Literal):
        return 0
    if isinstance(t, Iri):
        return 1
    return 2


def compare_terms(a, b) -> int:
    """ORDER BY comparison: unbound first, numeric pairs by value, else
    codepoint order with literals before IRIs before blank nodes."""
    if a is None or b is None:
        return (a is not None) - (b is not None)
    na, nb = numeric_value(a), numeric_value(b)
    if na is not None and nb is not None:
        return (na > nb) - (na < nb)
    ca, cb = _category(a), _category(b)
    if ca != cb:
        return ca - cb
    x = a.lexical if isinstance(a, Literal) else a.value if isinstance(a, Iri) else a.label
    y = b.lexical if isinstance(b, Literal) else b.value if isinstance(b, Iri) else b.label
    return (x > y) - (x < y)


def order_solutions(solutions: list[Solution], keys: list[tuple[Var, bool]]) -> list[Solution]:
    def cmp(m1, m2):
        for var, asc in keys:
            c = compare_terms(m1.get(var.name), m2.get(var.name))
            if c:
                return c if asc else -c
        return 0

    return sorted(solutions, key=cmp_to_key(cmp))


def evaluate(q: Query, store: GraphStore, cancel=None) -> SolutionTable:
    """Evaluate ``q``; ``cancel`` is an optional threading.Event checked while
    joining, raising QueryCancelled once set."""
    solutions = eval_group(q.pattern, store, cancel=cancel)
    # a solution binding nothing (e.g. from "WHERE {}") is not reported
    solutions = [mu for mu in solutions if mu]
    if q.order_by:
        solutions = order_solutions(solutions, q.order_by)
    header = q.header()
    rows = [tuple(mu.get(v) for v in header) for mu in solutions]
    if q.distinct:
        rows = list(dict.fromkeys(rows))
    start = q.offset or 0
    end = None if q.limit is None else start + q.limit
    return SolutionTable(header, rows[start:end])
