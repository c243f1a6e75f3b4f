"""Forward-chaining RDFS-plus materialization and consistency checking.

Rules, applied to a fixpoint:

R1 subclass transitivity    (a sc b), (b sc c)              => (a sc c)
R2 type inheritance         (x type c), c sc* d             => (x type d)
R3 subproperty inheritance  (x p y), p sp* q                => (x q y)
R4 domain typing            (x p y), domain(p) = c          => (x type c)
R5 range typing             (x p y), range(p) = c, p object => (y type c)   y not a literal
R6 inverse                  (x p y), q in inverses(p)       => (y q x)      y not a literal

R2-R6 read the vocabulary from the SchemaIndex; R1 closes whatever subclass
edges are present in the store itself.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .schema import OBJECT, SchemaIndex, disjointness_violations
from .schema import DATA
from .store import GraphStore
from .terms import RDF_TYPE, RDFS_SUBCLASSOF, Iri, Literal, Triple

RULES = ("R1-subclass-transitivity", "R2-type-inheritance", "R3-subproperty",
         "R4-domain", "R5-range", "R6-inverse")


@dataclass
class InferenceStats:
    rounds: int = 0
    inferred_triples: int = 0
    rule_firings: Counter = field(default_factory=Counter)
    inferred: list[Triple] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "inferredTriples": self.inferred_triples,
            "ruleFirings": {r: self.rule_firings.get(r, 0) for r in RULES},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"rounds: {self.rounds}", f"inferred triples: {self.inferred_triples}"]
        lines += [f"  {r}: {self.rule_firings.get(r, 0)}" for r in RULES]
        return "\n".join(lines) + "\n"


def _consequences(t: Triple, store: GraphStore, schema: SchemaIndex):
    s, p, o = t
    if p == RDFS_SUBCLASSOF:
        for c in store.objects(o, RDFS_SUBCLASSOF):
            yield RULES[0], Triple(s, RDFS_SUBCLASSOF, c)
        for a in store.subjects(RDFS_SUBCLASSOF, s):
            yield RULES[0], Triple(a, RDFS_SUBCLASSOF, o)
    if p == RDF_TYPE and isinstance(o, Iri):
        for d in schema.ancestors(o):
            yield RULES[1], Triple(s, RDF_TYPE, d)
    for q in schema.superproperties(p):
        yield RULES[2], Triple(s, q, o)
    decl = schema.properties.get(p)
    if decl is None:
        return
    for c in decl.domains:
        yield RULES[3], Triple(s, RDF_TYPE, c)
    if isinstance(o, Literal):
        return
    if decl.kind == OBJECT:
        for c in decl.ranges:
            yield RULES[4], Triple(o, RDF_TYPE, c)
    for q in schema.inverse.get(p, ()):
        yield RULES[5], Triple(o, q, s)


def materialize(store: GraphStore, schema: SchemaIndex) -> InferenceStats:
    """Add every inferable triple to ``store`` (semi-naive evaluation)."""
    stats = InferenceStats()
    before = len(store)
    delta = list(store)
    while True:
        stats.rounds += 1
        fresh = []
        for t in delta:
            for rule, new in _consequences(t, store, schema):
                if store.add(new):
                    stats.rule_firings[rule] += 1
                    fresh.append(new)
        stats.inferred.extend(fresh)
        if not fresh:
            break
        delta = fresh
    stats.inferred_triples = len(store) - before
    return stats


def is_closed(store: GraphStore, schema: SchemaIndex) -> bool:
    """True when no rule would add anything to ``store``."""
    return all(new in store for t in store for _, new in _consequences(t, store, schema))


def types_of(store: GraphStore, individual) -> set[Iri]:
    return {o for o in store.objects(individual, RDF_TYPE) if isinstance(o, Iri)}


@dataclass(frozen=True)
class Clash:
    individual: object
    reason: str
    witnesses: tuple[Triple, ...]

    def to_dict(self) -> dict:
        return {
            "individual": self.individual.n3(),
            "reason": self.reason,
            "witnesses": [w.n3() for w in self.witnesses],
        }


@dataclass
class ConsistencyReport:
    clashes: list[Clash] = field(default_factory=list)
    best_effort: bool = False

    @property
    def consistent(self) -> bool:
        return not self.clashes

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "clashes": [c.to_dict() for c in self.clashes],
            "bestEffort": self.best_effort,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        head = "consistent" if self.consistent else f"INCONSISTENT ({len(self.clashes)} clash(es))"
        if self.best_effort:
            head += " [best effort: store not materialized]"
        lines = [head]
        for c in self.clashes:
            lines.append(f"  {c.individual.n3()}: {c.reason}")
        return "\n".join(lines) + "\n"


def check_consistency(store: GraphStore, schema: SchemaIndex) -> ConsistencyReport:
    clashes = []
    for v in disjointness_violations(store, schema):
        s = v.triple.subject
        a = v.triple.object
        b = next(c for c in sorted(schema.closure_of_types(types_of(store, s)), key=lambda c: c.value)
                 if schema.disjoint(a, c))
        clashes.append(Clash(s, f"member of disjoint classes {a.value} and {b.value}",
                             (Triple(s, RDF_TYPE, a), Triple(s, RDF_TYPE, b))))
    for p, decl in sorted(schema.properties.items(), key=lambda kv: kv[0].value):
        if decl.kind not in (OBJECT, DATA):
            continue
        for t in store.match(None, p, None):
            if decl.kind == OBJECT and isinstance(t.object, Literal):
                clashes.append(Clash(t.subject, f"literal in object property {p.value}", (t,)))
            elif decl.kind == DATA and not isinstance(t.object, Literal):
                clashes.append(Clash(t.subject, f"resource in data property {p.value}", (t,)))
    return ConsistencyReport(clashes, best_effort=not is_closed(store, schema))
