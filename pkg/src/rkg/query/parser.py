"""Recursive-descent parser for the supported SPARQL SELECT subset."""

from __future__ import annotations

import re

from .._lex import Lexer, ParseError, TokenStream
from ..store import DEFAULT_PREFIXES, PrefixError, PrefixMap, resolve_curie
from ..terms import RDF_TYPE, XSD, XSD_STRING, Iri, Literal, TermError, unescape_string
from .ast import (
    And, Bound, Compare, Filter, GroupPattern, Not, OptionalPattern, Or, Query,
    TriplePattern, UnionPattern, Var,
)

_SPARQL = Lexer([
    ("WS", r"\s+"),
    ("COMMENT", r"\#[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\x00-\x20]*>"),
    ("STRING_LONG2", r'"""(?:[^"\\]|\\.|"(?!""))*"""'),
    ("STRING_LONG1", r"'''(?:[^'\\]|\\.|'(?!''))*'''"),
    ("STRING2", r'"(?:[^"\\\n\r]|\\.)*"'),
    ("STRING1", r"'(?:[^'\\\n\r]|\\.)*'"),
    ("VAR", r"[?$][A-Za-z0-9_]\w*"),
    ("BNODE", r"_:[\w](?:[\w.-]*[\w-])?"),
    ("PNAME", r"(?:[A-Za-z](?:[\w.-]*[\w-])?)?:(?:[\w:%-](?:[\w.:%-]*[\w:%-])?)?"),
    ("AT", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("DOUBLE", r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)"),
    ("DECIMAL", r"[+-]?\d*\.\d+"),
    ("INTEGER", r"[+-]?\d+"),
    ("DTYPE", r"\^\^"),
    ("OP", r"!=|<=|>=|&&|\|\||[=<>!]"),
    ("PUNCT", r"[{}().;,*\[\]]"),
    ("NAME", r"[A-Za-z_]\w*"),
], re.S)

_STRING_KINDS = {"STRING_LONG2": 3, "STRING_LONG1": 3, "STRING2": 1, "STRING1": 1}
_NUMERIC_KINDS = {"INTEGER": "integer", "DECIMAL": "decimal", "DOUBLE": "double"}
_COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")


class _QueryParser:
    def __init__(self, text: str, prefixes: dict | None):
        self.ts = TokenStream(_SPARQL.tokenize(text))
        self.env = PrefixMap(DEFAULT_PREFIXES if prefixes is None else prefixes)
        self.declared = PrefixMap()

    def kw(self, word: str) -> bool:
        return self.ts.accept("NAME", word, ci=True) is not None

    def expect_kw(self, word: str):
        self.ts.expect("NAME", word, ci=True, what=word)

    def parse(self) -> Query:
        ts = self.ts
        while True:
            if self.kw("PREFIX"):
                tok = ts.expect("PNAME", what="prefix label")
                if not tok.value.endswith(":") or tok.value.count(":") != 1:
                    raise ts.error("malformed prefix label", tok)
                iri = self._iriref(ts.expect("IRIREF", what="namespace IRI"))
                self.env.bind(tok.value[:-1], iri.value)
                self.declared.bind(tok.value[:-1], iri.value)
            elif self.kw("BASE"):
                ts.expect("IRIREF", what="base IRI")
            else:
                break
        self.expect_kw("SELECT")
        distinct = self.kw("DISTINCT")
        if not distinct:
            self.kw("REDUCED")
        projection: list[Var] | None
        if ts.accept("PUNCT", "*"):
            projection = None
        else:
            projection = []
            while ts.at("VAR"):
                projection.append(Var(ts.next().value[1:]))
            if not projection:
                raise ts.error("expected '*' or projection variables")
        self.kw("WHERE")
        pattern = self._group()
        order_by = []
        limit = offset = None
        if self.kw("ORDER"):
            self.expect_kw("BY")
            order_by.append(self._order_key())
            while ts.at("VAR") or ts.at("PUNCT", "(") or ts.at("NAME", "ASC", ci=True) \
                    or ts.at("NAME", "DESC", ci=True):
                order_by.append(self._order_key())
        for _ in range(2):
            if limit is None and self.kw("LIMIT"):
                limit = int(ts.expect("INTEGER", what="LIMIT count").value)
            elif offset is None and self.kw("OFFSET"):
                offset = int(ts.expect("INTEGER", what="OFFSET count").value)
        if not ts.at("EOF"):
            raise ts.error("unexpected trailing input")
        return Query(self.declared, pattern, projection, distinct, order_by, limit, offset)

    def _order_key(self) -> tuple[Var, bool]:
        ts = self.ts
        for word, asc in (("ASC", True), ("DESC", False)):
            if self.kw(word):
                ts.expect("PUNCT", "(")
                var = Var(ts.expect("VAR", what="variable").value[1:])
                ts.expect("PUNCT", ")")
                return var, asc
        if ts.accept("PUNCT", "("):
            var = Var(ts.expect("VAR", what="variable").value[1:])
            ts.expect("PUNCT", ")")
            return var, True
        return Var(ts.expect("VAR", what="ORDER BY key").value[1:]), True

    def _group(self) -> GroupPattern:
        ts = self.ts
        ts.expect("PUNCT", "{", what="'{'")
        group = GroupPattern()
        while not ts.accept("PUNCT", "}"):
            if ts.at("EOF"):
                raise ts.error("unterminated group, expected '}'")
            if self.kw("OPTIONAL"):
                group.elements.append(OptionalPattern(self._group()))
            elif self.kw("FILTER"):
                group.elements.append(Filter(self._filter_constraint()))
            elif ts.at("PUNCT", "{"):
                node = self._group()
                while self.kw("UNION"):
                    # n-ary unions nest to the left
                    left = node if isinstance(node, GroupPattern) else GroupPattern([node])
                    node = UnionPattern(left, self._group())
                group.elements.append(node)
            elif ts.at("PUNCT", "."):
                ts.next()
                continue
            else:
                self._triples_same_subject(group)
                if not ts.at("PUNCT", "}"):
                    if not ts.accept("PUNCT", "."):
                        tok = ts.peek
                        if not (tok.kind == "NAME" and tok.value.upper() in ("OPTIONAL", "FILTER")
                                or tok.kind == "PUNCT" and tok.value == "{"):
                            raise ts.error("expected '.' or '}'")
        return group

    def _triples_same_subject(self, group: GroupPattern):
        ts = self.ts
        subj = self._var_or_term(position="subject")
        while True:
            pred = self._verb()
            while True:
                obj = self._var_or_term(position="object")
                group.elements.append(TriplePattern(subj, pred, obj))
                if not ts.accept("PUNCT", ","):
                    break
            if not ts.accept("PUNCT", ";"):
                return
            while ts.accept("PUNCT", ";"):
                pass
            if ts.at("PUNCT", ".") or ts.at("PUNCT", "}"):
                return

    def _verb(self):
        ts = self.ts
        if ts.accept("NAME", "a"):
            return RDF_TYPE
        if ts.at("VAR"):
            return Var(ts.next().value[1:])
        if ts.peek.kind in ("IRIREF", "PNAME"):
            return self._iri()
        raise ts.error("expected predicate")

    def _var_or_term(self, position: str):
        ts = self.ts
        tok = ts.peek
        if tok.kind == "VAR":
            ts.next()
            return Var(tok.value[1:])
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri()
        if position == "object" and (tok.kind in _STRING_KINDS or tok.kind in _NUMERIC_KINDS
                                     or tok.kind == "NAME" and tok.value in ("true", "false")):
            return self._literal()
        if tok.kind == "BNODE" or tok.kind == "PUNCT" and tok.value == "[":
            raise ts.error("blank nodes are not supported in query patterns")
        raise ts.error(f"expected {position}")

    def _iri(self) -> Iri:
        tok = self.ts.next()
        if tok.kind == "IRIREF":
            return self._iriref(tok)
        try:
            return resolve_curie(self.env, tok.value)
        except (PrefixError, TermError) as e:
            raise self.ts.error(str(e), tok) from None

    def _iriref(self, tok) -> Iri:
        try:
            return Iri(tok.value[1:-1])
        except TermError as e:
            raise self.ts.error(str(e), tok) from None

    def _literal(self) -> Literal:
        ts = self.ts
        tok = ts.next()
        if tok.kind in _NUMERIC_KINDS:
            return Literal(tok.value, Iri(XSD + _NUMERIC_KINDS[tok.kind]))
        if tok.kind == "NAME":
            return Literal(tok.value, Iri(XSD + "boolean"))
        q = _STRING_KINDS[tok.kind]
        try:
            lexical = unescape_string(tok.value[q:-q])
        except TermError as e:
            raise ts.error(str(e), tok) from None
        if ts.at("AT"):
            return Literal(lexical, lang=ts.next().value[1:])
        if ts.accept("DTYPE"):
            if ts.peek.kind not in ("IRIREF", "PNAME"):
                raise ts.error("expected datatype IRI")
            return Literal(lexical, self._iri())
        return Literal(lexical, XSD_STRING)

    # -- expressions --

    def _filter_constraint(self):
        ts = self.ts
        if ts.at("NAME", "BOUND", ci=True):
            return self._primary()
        ts.expect("PUNCT", "(", what="'(' after FILTER")
        expr = self._or()
        ts.expect("PUNCT", ")", what="')'")
        return expr

    def _or(self):
        left = self._and()
        while self.ts.accept("OP", "||"):
            left = Or(left, self._and())
        return left

    def _and(self):
        left = self._unary()
        while self.ts.accept("OP", "&&"):
            left = And(left, self._unary())
        return left

    def _unary(self):
        if self.ts.accept("OP", "!"):
            return Not(self._unary())
        return self._relational()

    def _relational(self):
        left = self._primary()
        tok = self.ts.peek
        if tok.kind == "OP" and tok.value in _COMPARATORS:
            self.ts.next()
            return Compare(tok.value, left, self._primary())
        return left

    def _primary(self):
        ts = self.ts
        tok = ts.peek
        if tok.kind == "PUNCT" and tok.value == "(":
            ts.next()
            expr = self._or()
            ts.expect("PUNCT", ")", what="')'")
            return expr
        if self.kw("BOUND"):
            ts.expect("PUNCT", "(", what="'(' after BOUND")
            var = Var(ts.expect("VAR", what="variable").value[1:])
            ts.expect("PUNCT", ")", what="')'")
            return Bound(var)
        if tok.kind == "VAR":
            ts.next()
            return Var(tok.value[1:])
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri()
        if tok.kind in _STRING_KINDS or tok.kind in _NUMERIC_KINDS \
                or tok.kind == "NAME" and tok.value in ("true", "false"):
            return self._literal()
        raise ts.error("expected expression")


def parse_query(text: str, prefixes: dict | None = None) -> Query:
    """Parse a SELECT query; raises ParseError with line/column on bad input."""
    return _QueryParser(text, prefixes).parse()


__all__ = ["parse_query", "ParseError"]
