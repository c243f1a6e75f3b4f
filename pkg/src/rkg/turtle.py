"""Turtle and N-Triples parsing and serialization."""

from __future__ import annotations

import re
from collections import defaultdict
from itertools import count
from urllib.parse import urljoin

from ._lex import Lexer, ParseError, TokenStream
from .store import DEFAULT_PREFIXES, GraphStore, PrefixError, PrefixMap, resolve_curie
from .terms import (
    RDF_TYPE, XSD, XSD_STRING, BlankNode, Iri, Literal, Term, TermError, Triple,
    escape_string, unescape_string,
)

__all__ = [
    "ParseError", "parse_turtle", "serialize_turtle", "parse_ntriples",
    "serialize_ntriples", "load_turtle",
]

_TURTLE = Lexer([
    ("WS", r"\s+"),
    ("COMMENT", r"\#[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\x00-\x20]*>"),
    ("STRING_LONG2", r'"""(?:[^"\\]|\\.|"(?!""))*"""'),
    ("STRING_LONG1", r"'''(?:[^'\\]|\\.|'(?!''))*'''"),
    ("STRING2", r'"(?:[^"\\\n\r]|\\.)*"'),
    ("STRING1", r"'(?:[^'\\\n\r]|\\.)*'"),
    ("BNODE", r"_:[\w](?:[\w.-]*[\w-])?"),
    ("PNAME", r"(?:[A-Za-z](?:[\w.-]*[\w-])?)?:(?:[\w:%-](?:[\w.:%-]*[\w:%-])?)?"),
    ("AT", r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"),
    ("DOUBLE", r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)"),
    ("DECIMAL", r"[+-]?\d*\.\d+"),
    ("INTEGER", r"[+-]?\d+"),
    ("DTYPE", r"\^\^"),
    ("PUNCT", r"[.;,\[\]()]"),
    ("NAME", r"[A-Za-z_]\w*"),
], re.S)

_NUMERIC_KINDS = {"INTEGER": "integer", "DECIMAL": "decimal", "DOUBLE": "double"}
_STRING_KINDS = {"STRING_LONG2": 3, "STRING_LONG1": 3, "STRING2": 1, "STRING1": 1}


class _TurtleParser:
    def __init__(self, text: str, prefixes: dict | None):
        self.ts = TokenStream(_TURTLE.tokenize(text))
        self.env = PrefixMap(DEFAULT_PREFIXES if prefixes is None else prefixes)
        self.declared = PrefixMap()
        self.base: str | None = None
        self.triples: list[Triple] = []
        self.explicit_bnodes: set[str] = set()
        self._fresh = count(1)

    def parse(self):
        ts = self.ts
        while not ts.at("EOF"):
            if self._directive():
                continue
            self._triples()
            ts.expect("PUNCT", ".", what="'.' at end of statement")
        return self.triples, self.declared

    def _directive(self) -> bool:
        ts = self.ts
        tok = ts.peek
        if tok.kind == "AT" and tok.value in ("@prefix", "@base"):
            ts.next()
            self._prefix_or_base(tok.value[1:])
            ts.expect("PUNCT", ".", what="'.' after directive")
            return True
        if tok.kind == "NAME" and tok.value.upper() in ("PREFIX", "BASE"):
            ts.next()
            self._prefix_or_base(tok.value.lower())
            return True
        return False

    def _prefix_or_base(self, which: str):
        ts = self.ts
        if which == "prefix":
            tok = ts.expect("PNAME", what="prefix label")
            if not tok.value.endswith(":") or tok.value.count(":") != 1:
                raise ts.error("malformed prefix label", tok)
            label = tok.value[:-1]
            ns = self._iriref(ts.expect("IRIREF", what="namespace IRI"))
            self.env.bind(label, ns.value)
            self.declared.bind(label, ns.value)
        else:
            self.base = self._iriref(ts.expect("IRIREF", what="base IRI")).value

    def _triples(self):
        ts = self.ts
        if ts.at("PUNCT", "["):
            subj = self._bnode_property_list()
            if ts.at("PUNCT", "."):
                return
        else:
            subj = self._subject()
        self._predicate_object_list(subj)

    def _subject(self):
        tok = self.ts.peek
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri()
        if tok.kind == "BNODE":
            return self._bnode(self.ts.next())
        if tok.kind == "PUNCT" and tok.value == "(":
            raise self.ts.error("collections are not supported")
        raise self.ts.error("expected subject")

    def _predicate_object_list(self, subj):
        ts = self.ts
        while True:
            pred = self._verb()
            self._object_list(subj, pred)
            if not ts.accept("PUNCT", ";"):
                return
            while ts.accept("PUNCT", ";"):
                pass
            if ts.at("PUNCT", ".") or ts.at("PUNCT", "]") or ts.at("EOF"):
                return

    def _verb(self) -> Iri:
        ts = self.ts
        if ts.accept("NAME", "a"):
            return RDF_TYPE
        if ts.peek.kind in ("IRIREF", "PNAME"):
            return self._iri()
        raise ts.error("expected predicate")

    def _object_list(self, subj, pred):
        while True:
            obj = self._object()
            self._emit(subj, pred, obj)
            if not self.ts.accept("PUNCT", ","):
                return

    def _object(self) -> Term:
        ts = self.ts
        tok = ts.peek
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri()
        if tok.kind == "BNODE":
            return self._bnode(ts.next())
        if tok.kind == "PUNCT" and tok.value == "[":
            return self._bnode_property_list()
        if tok.kind in _STRING_KINDS:
            return self._literal()
        if tok.kind in _NUMERIC_KINDS:
            ts.next()
            return Literal(tok.value, Iri(XSD + _NUMERIC_KINDS[tok.kind]))
        if tok.kind == "NAME" and tok.value in ("true", "false"):
            ts.next()
            return Literal(tok.value, Iri(XSD + "boolean"))
        if tok.kind == "PUNCT" and tok.value == "(":
            raise ts.error("collections are not supported")
        raise ts.error("expected object")

    def _literal(self) -> Literal:
        ts = self.ts
        tok = ts.next()
        q = _STRING_KINDS[tok.kind]
        try:
            lexical = unescape_string(tok.value[q:-q])
        except TermError as e:
            raise ts.error(str(e), tok) from None
        if ts.peek.kind == "AT":
            lang = ts.next().value[1:]
            return Literal(lexical, lang=lang)
        if ts.accept("DTYPE"):
            if ts.peek.kind not in ("IRIREF", "PNAME"):
                raise ts.error("expected datatype IRI")
            return Literal(lexical, self._iri())
        return Literal(lexical, XSD_STRING)

    def _bnode_property_list(self) -> BlankNode:
        ts = self.ts
        ts.expect("PUNCT", "[")
        node = self._fresh_bnode()
        if not ts.accept("PUNCT", "]"):
            self._predicate_object_list(node)
            ts.expect("PUNCT", "]", what="']'")
        return node

    def _iri(self) -> Iri:
        tok = self.ts.next()
        if tok.kind == "IRIREF":
            return self._iriref(tok)
        try:
            return resolve_curie(self.env, tok.value)
        except PrefixError as e:
            raise self.ts.error(str(e), tok) from None
        except TermError as e:
            raise self.ts.error(str(e), tok) from None

    def _iriref(self, tok) -> Iri:
        value = unescape_string(tok.value[1:-1]) if "\\" in tok.value else tok.value[1:-1]
        if self.base and not re.match(r"^[A-Za-z][A-Za-z0-9+.-]*:", value):
            value = urljoin(self.base, value)
        try:
            return Iri(value)
        except TermError as e:
            raise self.ts.error(str(e), tok) from None

    def _bnode(self, tok) -> BlankNode:
        label = tok.value[2:]
        self.explicit_bnodes.add(label)
        return BlankNode(label)

    def _fresh_bnode(self) -> BlankNode:
        while True:
            label = f"genid{next(self._fresh)}"
            if label not in self.explicit_bnodes:
                return BlankNode(label)

    def _emit(self, s, p, o):
        self.triples.append(Triple(s, p, o))


def parse_turtle(text: str, prefixes: dict | None = None) -> tuple[list[Triple], PrefixMap]:
    """Parse Turtle text into ``(triples, declared_prefixes)``.

    ``prefixes`` seeds the resolution environment; only prefixes declared in
    ``text`` itself are returned.
    """
    return _TurtleParser(text, prefixes).parse()


def load_turtle(text: str, store: GraphStore | None = None) -> GraphStore:
    triples, declared = parse_turtle(text, store.prefixes if store is not None else None)
    if store is None:
        store = GraphStore()
    store.prefixes.update_from(declared)
    store.update(triples)
    return store


def _ntriples_key(t: Triple) -> tuple[str, str, str]:
    return (t.subject.n3(), t.predicate.n3(), t.object.n3())


def _render(term: Term, pm: PrefixMap, position: str) -> str:
    if isinstance(term, Iri):
        if position == "p" and term == RDF_TYPE:
            return "a"
        curie = pm.compact(term)
        return curie if curie is not None else term.n3()
    if isinstance(term, Literal):
        text = _quote(term.lexical)
        if term.lang is not None:
            return f"{text}@{term.lang}"
        if term.datatype == XSD_STRING:
            return text
        dt = pm.compact(term.datatype)
        return f"{text}^^{dt if dt is not None else term.datatype.n3()}"
    return term.n3()


def _quote(s: str) -> str:
    return '"' + escape_string(s) + '"'


def serialize_turtle(store: GraphStore, prefixes: dict | None = None) -> str:
    """Deterministic Turtle: sorted prefixes, subjects grouped, everything sorted
    by canonical N-Triples form."""
    pm = PrefixMap(store.prefixes if prefixes is None else prefixes)
    lines = [f"@prefix {label}: <{ns}> ." for label, ns in sorted(pm.items())]
    grouped: dict = defaultdict(lambda: defaultdict(list))
    for t in store:
        grouped[t.subject][t.predicate].append(t.object)
    for s in sorted(grouped, key=lambda x: x.n3()):
        preds = grouped[s]
        chunks = []
        for p in sorted(preds, key=lambda x: x.n3()):
            objs = sorted(preds[p], key=lambda x: x.n3())
            rendered = " , ".join(_render(o, pm, "o") for o in objs)
            chunks.append(f"{_render(p, pm, 'p')} {rendered}")
        if lines:
            lines.append("")
        lines.append(f"{_render(s, pm, 's')} " + " ;\n    ".join(chunks) + " .")
    return "\n".join(lines) + "\n" if lines else ""


_NT_IRI = r"<([^<>\"{}|^`\\\x00-\x20]*)>"
_NT_BNODE = r"_:([\w](?:[\w.-]*[\w-])?)"
_NT_LITERAL = r'"((?:[^"\\\n\r]|\\.)*)"(?:\^\^<([^<>\s]*)>|@([A-Za-z]+(?:-[A-Za-z0-9]+)*))?'
_NT_LINE = re.compile(
    rf"^\s*(?:{_NT_IRI}|{_NT_BNODE})\s*{_NT_IRI}\s*"
    rf"(?:{_NT_IRI}|{_NT_BNODE}|{_NT_LITERAL})\s*\.\s*(?:#.*)?$"
)


def parse_ntriples(text: str) -> list[Triple]:
    triples = []
    # split on newlines only; str.splitlines() would also break at \f, \x85 etc.
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _NT_LINE.match(line)
        if m is None:
            raise ParseError("malformed N-Triples statement", lineno, 1, stripped[:40])
        s_iri, s_bn, p, o_iri, o_bn, lex, dt, lang = m.groups()
        try:
            subj = Iri(s_iri) if s_iri is not None else BlankNode(s_bn)
            if o_iri is not None:
                obj = Iri(o_iri)
            elif o_bn is not None:
                obj = BlankNode(o_bn)
            elif lang is not None:
                obj = Literal(unescape_string(lex), lang=lang)
            else:
                obj = Literal(unescape_string(lex), Iri(dt) if dt else XSD_STRING)
            triples.append(Triple(subj, Iri(p), obj))
        except TermError as e:
            raise ParseError(str(e), lineno, 1, stripped[:40]) from None
    return triples


def serialize_ntriples(store) -> str:
    lines = sorted(t.n3() for t in store)
    return "".join(line + "\n" for line in lines)


def canonical_lines(triples) -> list[str]:
    """Sorted canonical N-Triples lines; the graph-equality medium."""
    return sorted({Triple(*t).n3() for t in triples})
