"""Indexed in-memory triple store and prefix handling."""

from __future__ import annotations

import logging
import re
from typing import Iterable, Iterator

from .terms import BASE, OPENCARE, OWL, RDF, RDFS, XSD, Iri, Term, Triple, check_triple

log = logging.getLogger(__name__)

DEFAULT_PREFIXES = {
    "": BASE,
    "rdf": RDF,
    "rdfs": RDFS,
    "owl": OWL,
    "xsd": XSD,
}

WELL_KNOWN_PREFIXES = {
    **DEFAULT_PREFIXES,
    "foaf": "http://xmlns.com/foaf/0.1/",
    "schema": "https://schema.org/",
    "dcterms": "http://purl.org/dc/terms/",
    "bibo": "http://purl.org/ontology/bibo/",
    "opencare": OPENCARE,
}

_CURIE = re.compile(r"^([A-Za-z][\w.-]*)?:(.*)$", re.S)


class PrefixError(KeyError):
    """A CURIE used a prefix that is not bound."""

    def __init__(self, prefix: str):
        super().__init__(prefix)
        self.prefix = prefix

    def __str__(self):
        return f"unknown prefix {self.prefix!r}"


class PrefixMap(dict):
    """Ordered prefix label -> namespace mapping.

    Re-binding a label keeps the last namespace and records a warning.
    """

    def __init__(self, *args, **kwargs):
        super().__init__()
        self.warnings: list[str] = []
        for k, v in dict(*args, **kwargs).items():
            super().__setitem__(k, v)

    def bind(self, prefix: str, namespace: str) -> None:
        if isinstance(namespace, Iri):
            namespace = namespace.value
        old = self.get(prefix)
        if old is not None and old != namespace:
            msg = f"prefix {prefix!r} re-declared: {old} -> {namespace}"
            self.warnings.append(msg)
            log.warning(msg)
        self[prefix] = namespace

    def update_from(self, other: dict) -> None:
        for k, v in other.items():
            self.bind(k, v)

    def expand(self, curie: str) -> Iri:
        return resolve_curie(self, curie)

    def compact(self, iri: Iri) -> str | None:
        """Shortest ``prefix:local`` form of ``iri``, or None when no prefix fits."""
        best = None
        for prefix, ns in self.items():
            if iri.value.startswith(ns):
                local = iri.value[len(ns):]
                if _safe_local(local) and (best is None or len(local) < len(best[1])):
                    best = (prefix, local)
        return None if best is None else f"{best[0]}:{best[1]}"

    def copy(self) -> "PrefixMap":
        return PrefixMap(self)


_LOCAL = re.compile(r"^(?:[A-Za-z0-9_](?:[\w-]|\.(?=[\w.-]*[\w-]))*)?$")


def _safe_local(local: str) -> bool:
    return bool(_LOCAL.match(local)) and local.isascii()


def resolve_curie(pm: dict, curie: str) -> Iri:
    m = _CURIE.match(curie)
    if m is None:
        raise ValueError(f"not a CURIE: {curie!r}")
    prefix = m.group(1) or ""
    if prefix not in pm:
        raise PrefixError(prefix)
    ns = pm[prefix]
    return Iri((ns.value if isinstance(ns, Iri) else ns) + m.group(2))


class GraphStore:
    """A set of triples with subject-, predicate- and object-first indexes.

    Index leaves are insertion-ordered dicts so that iteration order depends
    only on the history of the store, never on hash seeds.
    """

    def __init__(self, triples: Iterable[Triple] = (), prefixes: dict | None = None):
        self._spo: dict = {}
        self._pos: dict = {}
        self._osp: dict = {}
        self._size = 0
        self.prefixes = PrefixMap(DEFAULT_PREFIXES if prefixes is None else prefixes)
        for t in triples:
            self.add(t)

    def __len__(self):
        return self._size

    def __iter__(self) -> Iterator[Triple]:
        for s, by_p in self._spo.items():
            for p, objs in by_p.items():
                for o in objs:
                    yield Triple(s, p, o)

    def __contains__(self, t) -> bool:
        s, p, o = t
        return o in self._spo.get(s, {}).get(p, ())

    def __repr__(self):
        return f"<GraphStore {self._size} triples>"

    def add(self, t) -> bool:
        """Insert ``t``; return True iff it was not already present."""
        s, p, o = check_triple(t)
        objs = self._spo.setdefault(s, {}).setdefault(p, {})
        if o in objs:
            return False
        objs[o] = None
        self._pos.setdefault(p, {}).setdefault(o, {})[s] = None
        self._osp.setdefault(o, {}).setdefault(s, {})[p] = None
        self._size += 1
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(self.add(t) for t in triples)

    def remove(self, t) -> bool:
        s, p, o = t
        objs = self._spo.get(s, {}).get(p)
        if objs is None or o not in objs:
            return False
        del objs[o]
        _prune(self._spo, s, p)
        del self._pos[p][o][s]
        _prune(self._pos, p, o)
        del self._osp[o][s][p]
        _prune(self._osp, o, s)
        self._size -= 1
        return True

    def match(self, s: Term | None = None, p: Iri | None = None,
              o: Term | None = None) -> Iterator[Triple]:
        """Yield every triple agreeing with the bound (non-None) positions."""
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            if p is not None:
                objs = by_p.get(p, ())
                if o is not None:
                    if o in objs:
                        yield Triple(s, p, o)
                else:
                    for o2 in objs:
                        yield Triple(s, p, o2)
            elif o is not None:
                for p2 in self._osp.get(o, {}).get(s, ()):
                    yield Triple(s, p2, o)
            else:
                for p2, objs in by_p.items():
                    for o2 in objs:
                        yield Triple(s, p2, o2)
        elif p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            if o is not None:
                for s2 in by_o.get(o, ()):
                    yield Triple(s2, p, o)
            else:
                for o2, subjects in by_o.items():
                    for s2 in subjects:
                        yield Triple(s2, p, o2)
        elif o is not None:
            for s2, preds in self._osp.get(o, {}).items():
                for p2 in preds:
                    yield Triple(s2, p2, o)
        else:
            yield from self

    def objects(self, s, p) -> list[Term]:
        return list(self._spo.get(s, {}).get(p, ()))

    def subjects(self, p, o) -> list[Term]:
        return list(self._pos.get(p, {}).get(o, ()))

    def value(self, s, p):
        for o in self._spo.get(s, {}).get(p, ()):
            return o
        return None

    def subjects_all(self):
        return list(self._spo)

    def predicates_all(self):
        return list(self._pos)

    def copy(self) -> "GraphStore":
        return GraphStore(self, self.prefixes)

    def check_indexes(self) -> bool:
        """Full-enumeration check that all three indexes agree."""
        spo = {(s, p, o) for s, d in self._spo.items() for p, os in d.items() for o in os}
        pos = {(s, p, o) for p, d in self._pos.items() for o, ss in d.items() for s in ss}
        osp = {(s, p, o) for o, d in self._osp.items() for s, ps in d.items() for p in ps}
        return spo == pos == osp and len(spo) == self._size


def _prune(index, a, b):
    if not index[a][b]:
        del index[a][b]
        if not index[a]:
            del index[a]


def add_triple(store: GraphStore, t: Triple) -> bool:
    return store.add(t)


def match(store: GraphStore, s=None, p=None, o=None) -> Iterator[Triple]:
    return store.match(s, p, o)
