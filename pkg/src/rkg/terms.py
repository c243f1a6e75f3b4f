"""RDF terms and triples.

Terms are immutable and hashable so they can key the store indexes directly.
Every term renders to its canonical N-Triples form through ``n3()``; that form
doubles as the sort key for deterministic serialization.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

_BAD_IRI = re.compile(r'[\s<>"{}|^`\\]')
_LANG = re.compile(r"^[a-zA-Z]+(-[a-zA-Z0-9]+)*$")
_BNODE_LABEL = re.compile(r"^[\w](?:[\w.-]*[\w-])?$")


class TermError(ValueError):
    """A term or triple violates the RDF data model."""


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not self.value:
            raise TermError("IRI must be a non-empty string")
        if _BAD_IRI.search(self.value):
            raise TermError(f"IRI contains a forbidden character: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self):
        if not _BNODE_LABEL.match(self.label or ""):
            raise TermError(f"invalid blank node label: {self.label!r}")

    def n3(self) -> str:
        return f"_:{self.label}"

    def __str__(self):
        return self.n3()


XSD_STRING = Iri(XSD + "string")
RDF_LANGSTRING = Iri(RDF + "langString")


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: Iri = XSD_STRING
    lang: str | None = None

    def __post_init__(self):
        if not isinstance(self.lexical, str):
            raise TermError("literal lexical form must be a string")
        if self.lang is not None:
            if not _LANG.match(self.lang):
                raise TermError(f"invalid language tag: {self.lang!r}")
            object.__setattr__(self, "lang", self.lang.lower())
            object.__setattr__(self, "datatype", RDF_LANGSTRING)
        elif self.datatype is None:
            object.__setattr__(self, "datatype", XSD_STRING)
        elif self.datatype == RDF_LANGSTRING:
            raise TermError("rdf:langString literal requires a language tag")

    def n3(self) -> str:
        text = f'"{escape_string(self.lexical)}"'
        if self.lang is not None:
            return f"{text}@{self.lang}"
        return f"{text}^^{self.datatype.n3()}"

    def __str__(self):
        return self.lexical


Term = Union[Iri, Literal, BlankNode]
Subject = Union[Iri, BlankNode]


class Triple(NamedTuple):
    subject: Subject
    predicate: Iri
    object: Term

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


def check_triple(t) -> Triple:
    """Return ``t`` as a :class:`Triple`, raising :class:`TermError` if malformed."""
    try:
        s, p, o = t
    except (TypeError, ValueError):
        raise TermError(f"not a triple: {t!r}") from None
    if not isinstance(s, (Iri, BlankNode)):
        raise TermError(f"subject must be an IRI or blank node, got {s!r}")
    if not isinstance(p, Iri):
        raise TermError(f"predicate must be an IRI, got {p!r}")
    if not isinstance(o, (Iri, Literal, BlankNode)):
        raise TermError(f"object must be an RDF term, got {o!r}")
    return t if isinstance(t, Triple) else Triple(s, p, o)


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}
_ESCAPE_RE = re.compile(r"\\(u[0-9A-Fa-f]{4}|U[0-9A-Fa-f]{8}|.)", re.S)


def escape_string(s: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in s)


def unescape_string(s: str) -> str:
    def sub(m):
        code = m.group(1)
        if code[0] in "uU" and len(code) > 1:
            return chr(int(code[1:], 16))
        if code in _UNESCAPES:
            return _UNESCAPES[code]
        raise TermError(f"invalid escape sequence \\{code}")

    return _ESCAPE_RE.sub(sub, s)


class NS:
    """Namespace helper: ``NS(base).name`` and ``NS(base)["name"]`` build IRIs."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def __getitem__(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __repr__(self):
        return f"NS({self.base!r})"


BASE = "https://w3id.org/ontobio#"
OPENCARE = "https://w3id.org/ontobio/opencare#"

RDF_TYPE = Iri(RDF + "type")
RDFS_SUBCLASSOF = Iri(RDFS + "subClassOf")
RDFS_SUBPROPERTYOF = Iri(RDFS + "subPropertyOf")
RDFS_DOMAIN = Iri(RDFS + "domain")
RDFS_RANGE = Iri(RDFS + "range")
RDFS_CLASS = Iri(RDFS + "Class")
RDFS_LITERAL = Iri(RDFS + "Literal")
RDFS_LABEL = Iri(RDFS + "label")
RDF_PROPERTY = Iri(RDF + "Property")
OWL_CLASS = Iri(OWL + "Class")
OWL_OBJECTPROPERTY = Iri(OWL + "ObjectProperty")
OWL_DATATYPEPROPERTY = Iri(OWL + "DatatypeProperty")
OWL_ANNOTATIONPROPERTY = Iri(OWL + "AnnotationProperty")
OWL_INVERSEOF = Iri(OWL + "inverseOf")
OWL_DISJOINTWITH = Iri(OWL + "disjointWith")
OWL_THING = Iri(OWL + "Thing")

NUMERIC_DATATYPES = frozenset(
    Iri(XSD + name)
    for name in (
        "integer", "decimal", "float", "double", "int", "long", "short", "byte",
        "nonNegativeInteger", "nonPositiveInteger", "positiveInteger",
        "negativeInteger", "unsignedLong", "unsignedInt", "unsignedShort",
        "unsignedByte",
    )
)
