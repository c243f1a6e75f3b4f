"""Ontology schema index: class hierarchy, property declarations, metrics and
instance-data validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .store import GraphStore
from .terms import (
    OWL, OWL_ANNOTATIONPROPERTY, OWL_CLASS, OWL_DATATYPEPROPERTY, OWL_DISJOINTWITH,
    OWL_INVERSEOF, OWL_OBJECTPROPERTY, RDF, RDF_LANGSTRING, RDF_PROPERTY, RDF_TYPE,
    RDFS, RDFS_CLASS, RDFS_DOMAIN, RDFS_LITERAL, RDFS_RANGE, RDFS_SUBCLASSOF,
    RDFS_SUBPROPERTYOF, BASE, XSD, Iri, Literal, Triple,
)

FACET = Iri(BASE + "facet")
FACETS = ("Personality", "EnvironmentMilieu", "Achievements", "Shared")

OBJECT, DATA, ANNOTATION = "object", "data", "annotation"
_KIND_BY_TYPE = {
    OWL_OBJECTPROPERTY: OBJECT,
    OWL_DATATYPEPROPERTY: DATA,
    OWL_ANNOTATIONPROPERTY: ANNOTATION,
}
_BUILTIN_NAMESPACES = (RDF, RDFS, OWL)


class SchemaError(ValueError):
    """The schema assertions are contradictory (cycles, conflicting kinds)."""


@dataclass
class ClassDecl:
    iri: Iri
    superclasses: set[Iri] = field(default_factory=set)
    disjoint_with: set[Iri] = field(default_factory=set)
    facet: str | None = None


@dataclass
class PropertyDecl:
    iri: Iri
    kind: str
    domains: set[Iri] = field(default_factory=set)
    ranges: set[Iri] = field(default_factory=set)
    inverses: set[Iri] = field(default_factory=set)
    superproperties: set[Iri] = field(default_factory=set)


class SchemaIndex:
    """Immutable view of the class and property declarations of a graph.

    ``ancestors(c)`` and ``superproperties(p)`` return the strict transitive
    closures precomputed at construction.
    """

    def __init__(self, classes: dict[Iri, ClassDecl], properties: dict[Iri, PropertyDecl]):
        self.classes = classes
        self.properties = properties
        self._class_closure = _closure({c: d.superclasses for c, d in classes.items()}, "subclass")
        self._prop_closure = _closure(
            {p: d.superproperties for p, d in properties.items()}, "subproperty")
        inverse: dict[Iri, set[Iri]] = {}
        for p, d in properties.items():
            for q in d.inverses:
                inverse.setdefault(p, set()).add(q)
                inverse.setdefault(q, set()).add(p)
        self.inverse: dict[Iri, frozenset[Iri]] = {p: frozenset(qs) for p, qs in inverse.items()}

    def __repr__(self):
        return f"<SchemaIndex {len(self.classes)} classes, {len(self.properties)} properties>"

    def ancestors(self, cls: Iri) -> frozenset[Iri]:
        return self._class_closure.get(cls, frozenset())

    def superproperties(self, prop: Iri) -> frozenset[Iri]:
        return self._prop_closure.get(prop, frozenset())

    def closure_of_types(self, types: Iterable[Iri]) -> set[Iri]:
        out = set()
        for t in types:
            out.add(t)
            out |= self.ancestors(t)
        return out

    def disjoint(self, a: Iri, b: Iri) -> bool:
        decl = self.classes.get(a)
        return decl is not None and b in decl.disjoint_with

    def kind(self, prop: Iri) -> str | None:
        decl = self.properties.get(prop)
        return None if decl is None else decl.kind

    def facet_members(self, facet: str) -> list[Iri]:
        return sorted((c for c, d in self.classes.items() if d.facet == facet),
                      key=lambda c: c.value)


def _closure(edges: dict[Iri, set[Iri]], what: str) -> dict[Iri, frozenset[Iri]]:
    """Strict reachability for every node; raises SchemaError on a cycle."""
    done: dict[Iri, frozenset[Iri]] = {}
    state: dict[Iri, int] = {}

    def visit(node, path):
        if node in done:
            return done[node]
        if state.get(node) == 1:
            cycle = path[path.index(node):]
            names = ", ".join(c.value for c in cycle)
            raise SchemaError(f"{what} cycle among: {names}")
        state[node] = 1
        path.append(node)
        acc = set()
        for parent in edges.get(node, ()):
            acc.add(parent)
            acc |= visit(parent, path)
        path.pop()
        state[node] = 2
        done[node] = frozenset(acc)
        return done[node]

    for node in list(edges):
        visit(node, [])
    return done


def extract_schema(store: GraphStore) -> SchemaIndex:
    classes: dict[Iri, ClassDecl] = {}
    properties: dict[Iri, PropertyDecl] = {}

    def cls(iri) -> ClassDecl:
        if iri not in classes:
            classes[iri] = ClassDecl(iri)
        return classes[iri]

    for ctype in (OWL_CLASS, RDFS_CLASS):
        for s in store.subjects(RDF_TYPE, ctype):
            if isinstance(s, Iri):
                cls(s)
    for s, _, o in store.match(None, RDFS_SUBCLASSOF, None):
        if isinstance(s, Iri) and isinstance(o, Iri):
            cls(s).superclasses.add(o)
            cls(o)
    for s, _, o in store.match(None, OWL_DISJOINTWITH, None):
        if isinstance(s, Iri) and isinstance(o, Iri):
            cls(s).disjoint_with.add(o)
            cls(o).disjoint_with.add(s)
    for s, _, o in store.match(None, FACET, None):
        if isinstance(s, Iri) and isinstance(o, Literal):
            cls(s).facet = o.lexical

    for ptype, kind in _KIND_BY_TYPE.items():
        for s in store.subjects(RDF_TYPE, ptype):
            if not isinstance(s, Iri):
                continue
            existing = properties.get(s)
            if existing is not None and existing.kind != kind:
                raise SchemaError(
                    f"property {s.value} declared both {existing.kind} and {kind}")
            properties[s] = PropertyDecl(s, kind)

    def prop(iri) -> PropertyDecl:
        if iri not in properties:
            properties[iri] = PropertyDecl(iri, _guess_kind(store, iri))
        return properties[iri]

    for s in store.subjects(RDF_TYPE, RDF_PROPERTY):
        if isinstance(s, Iri):
            prop(s)
    for s, _, o in store.match(None, RDFS_DOMAIN, None):
        if isinstance(o, Iri):
            prop(s).domains.add(o)
    for s, _, o in store.match(None, RDFS_RANGE, None):
        if isinstance(o, Iri):
            prop(s).ranges.add(o)
    for s, _, o in store.match(None, RDFS_SUBPROPERTYOF, None):
        if isinstance(o, Iri):
            prop(s).superproperties.add(o)
            prop(o)
    for s, _, o in store.match(None, OWL_INVERSEOF, None):
        if not isinstance(o, Iri):
            continue
        for p in (prop(s), prop(o)):
            if p.kind != OBJECT:
                raise SchemaError(f"inverseOf used on {p.kind} property {p.iri.value}")
        prop(s).inverses.add(o)
        prop(o).inverses.add(s)

    # Object-property domains/ranges name classes even when undeclared.
    for p in properties.values():
        for c in p.domains:
            cls(c)
        if p.kind == OBJECT:
            for c in p.ranges:
                cls(c)
    return SchemaIndex(classes, properties)


def _guess_kind(store: GraphStore, iri: Iri) -> str:
    for r in store.objects(iri, RDFS_RANGE):
        if isinstance(r, Iri) and (r.value.startswith(XSD) or r in (RDFS_LITERAL, RDF_LANGSTRING)):
            return DATA
    return OBJECT


# -- metrics -----------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    class_count: int = 0
    object_property_count: int = 0
    data_property_count: int = 0
    annotation_property_count: int = 0
    individual_count: int = 0
    triple_count: int = 0

    ROWS = (
        ("Class count", "class_count"),
        ("Object property count", "object_property_count"),
        ("Data property count", "data_property_count"),
        ("Annotation Property count", "annotation_property_count"),
        ("Individual count", "individual_count"),
        ("Triple count", "triple_count"),
    )

    def to_dict(self) -> dict[str, int]:
        return {
            "classCount": self.class_count,
            "objectPropertyCount": self.object_property_count,
            "dataPropertyCount": self.data_property_count,
            "annotationPropertyCount": self.annotation_property_count,
            "individualCount": self.individual_count,
            "tripleCount": self.triple_count,
        }

    def to_text(self) -> str:
        width = max(len(label) for label, _ in self.ROWS)
        lines = [f"{'Metrics':<{width}}  Value"]
        for label, attr in self.ROWS:
            lines.append(f"{label:<{width}}  {getattr(self, attr)}")
        return "\n".join(lines) + "\n"


# metrics published for the full Ranganathan graph; reference only, the bundled
# seed is a small evidenced subset and does not reproduce them
FULL_GRAPH_REFERENCE = {
    "classCount": 198,
    "objectPropertyCount": 220,
    "dataPropertyCount": 69,
    "individualCount": 1809,
    "axiomCount": 13578,
}


def individuals(schema: SchemaIndex, data: GraphStore) -> set[Iri]:
    """IRIs typed by a declared class that are not themselves classes or properties."""
    out = set()
    for c in schema.classes:
        for s in data.subjects(RDF_TYPE, c):
            if isinstance(s, Iri) and s not in schema.classes and s not in schema.properties:
                out.add(s)
    return out


def compute_metrics(schema: SchemaIndex, data: GraphStore) -> Metrics:
    kinds = [p.kind for p in schema.properties.values()]
    return Metrics(
        class_count=len(schema.classes),
        object_property_count=kinds.count(OBJECT),
        data_property_count=kinds.count(DATA),
        annotation_property_count=kinds.count(ANNOTATION),
        individual_count=len(individuals(schema, data)),
        triple_count=len(data),
    )


# -- validation --------------------------------------------------------------

WARNING, ERROR = "warning", "error"
_SEVERITY_RANK = {WARNING: 0, ERROR: 1}


@dataclass(frozen=True)
class Violation:
    severity: str
    kind: str
    triple: Triple
    explanation: str

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "kind": self.kind,
            "triple": self.triple.n3(),
            "explanation": self.explanation,
        }


@dataclass
class ViolationReport:
    violations: list[Violation] = field(default_factory=list)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __bool__(self):
        return bool(self.violations)

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == ERROR]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == WARNING]

    def at_least(self, severity: str) -> "ViolationReport":
        rank = _SEVERITY_RANK[severity]
        return ViolationReport([v for v in self.violations if _SEVERITY_RANK[v.severity] >= rank])

    def to_dict(self) -> dict:
        return {
            "errors": len(self.errors),
            "warnings": len(self.warnings),
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_text(self) -> str:
        lines = [f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)"]
        for v in self.violations:
            lines.append(f"[{v.severity}] {v.kind}: {v.explanation}")
        return "\n".join(lines) + "\n"


def _is_builtin(p: Iri) -> bool:
    return p.value.startswith(_BUILTIN_NAMESPACES)


def _types(data: GraphStore, schema: SchemaIndex, node) -> set[Iri]:
    return schema.closure_of_types(t for t in data.objects(node, RDF_TYPE) if isinstance(t, Iri))


def _clash(schema: SchemaIndex, types: set[Iri], required: set[Iri]) -> tuple[Iri, Iri] | None:
    for r in sorted(required, key=lambda i: i.value):
        for t in sorted(types, key=lambda i: i.value):
            if schema.disjoint(t, r):
                return t, r
    return None


def _datatype_ok(lit: Literal, ranges: set[Iri]) -> bool:
    if not ranges or RDFS_LITERAL in ranges:
        return True
    return lit.datatype in ranges


def validate(data: GraphStore, schema: SchemaIndex, severity: str = WARNING) -> ViolationReport:
    """Check ``data`` against ``schema``; findings are report entries, never raised."""
    found: list[Violation] = []
    type_cache: dict = {}

    def types_of(node):
        if node not in type_cache:
            type_cache[node] = _types(data, schema, node)
        return type_cache[node]

    for t in data:
        s, p, o = t
        if _is_builtin(p):
            continue
        decl = schema.properties.get(p)
        if decl is None:
            found.append(Violation(WARNING, "undeclared-property", t,
                                   f"{p.value} is not declared in the schema"))
            continue
        if decl.kind == ANNOTATION:
            continue
        hit = _clash(schema, types_of(s), decl.domains)
        if hit:
            found.append(Violation(ERROR, "domain-mismatch", t,
                                   f"{s.n3()} is a {hit[0].value}, disjoint with domain "
                                   f"{hit[1].value} of {p.value}"))
        if decl.kind == OBJECT:
            if isinstance(o, Literal):
                found.append(Violation(ERROR, "range-mismatch", t,
                                       f"object property {p.value} used with literal {o.n3()}"))
            else:
                hit = _clash(schema, types_of(o), decl.ranges)
                if hit:
                    found.append(Violation(ERROR, "range-mismatch", t,
                                           f"{o.n3()} is a {hit[0].value}, disjoint with range "
                                           f"{hit[1].value} of {p.value}"))
        elif decl.kind == DATA:
            if not isinstance(o, Literal):
                found.append(Violation(ERROR, "range-mismatch", t,
                                       f"data property {p.value} used with resource {o.n3()}"))
            elif not _datatype_ok(o, decl.ranges):
                want = ", ".join(sorted(r.value for r in decl.ranges))
                found.append(Violation(ERROR, "datatype-mismatch", t,
                                       f"literal {o.n3()} does not match declared range {want}"))

    found.extend(disjointness_violations(data, schema, types_of))
    return ViolationReport(found).at_least(severity)


def disjointness_violations(data: GraphStore, schema: SchemaIndex, types_of=None) -> list[Violation]:
    types_of = types_of or (lambda n: _types(data, schema, n))
    out = []
    subjects = {s for s, _, _ in data.match(None, RDF_TYPE, None)}
    for s in sorted(subjects, key=lambda n: n.n3()):
        types = sorted(types_of(s), key=lambda c: c.value)
        for i, a in enumerate(types):
            for b in types[i + 1:]:
                if schema.disjoint(a, b):
                    witness = Triple(s, RDF_TYPE, a)
                    out.append(Violation(ERROR, "disjointness-clash", witness,
                                         f"{s.n3()} is both {a.value} and {b.value}, "
                                         f"which are disjoint"))
    return out
