import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import linear_match
from rkg.store import GraphStore, PrefixError, PrefixMap, add_triple, match, resolve_curie
from rkg.terms import (
    BASE, RDF_LANGSTRING, RDF_TYPE, XSD, XSD_STRING, BlankNode, Iri, Literal, TermError, Triple,
)

EX = "http://example.org/"
SUBJECTS = [Iri(EX + c) for c in "abcd"] + [BlankNode("b0")]
PREDICATES = [Iri(EX + p) for p in ("p", "q", "r")]
OBJECTS = SUBJECTS + [Literal("1", Iri(XSD + "integer")), Literal("x"), Literal("x", lang="en")]

triples = st.builds(Triple, st.sampled_from(SUBJECTS), st.sampled_from(PREDICATES),
                    st.sampled_from(OBJECTS))


def test_literal_defaults():
    assert Literal("a").datatype == XSD_STRING
    lit = Literal("colour", lang="EN-gb")
    assert lit.lang == "en-gb" and lit.datatype == RDF_LANGSTRING
    assert Literal("a") == Literal("a", XSD_STRING)
    assert Literal("1", Iri(XSD + "integer")) != Literal("1")


def test_iri_rejects_bad_characters():
    for bad in ("has space", "a<b", 'q"', "x{y}"):
        with pytest.raises(TermError):
            Iri(bad)


def test_add_and_match_examples():
    store = GraphStore()
    t = Triple(Iri(BASE + "SRRanganathan"), RDF_TYPE, Iri("http://xmlns.com/foaf/0.1/Person"))
    assert add_triple(store, t) is True
    assert add_triple(store, t) is False
    assert len(store) == 1
    assert list(match(store, None, RDF_TYPE, None)) == [t]
    assert list(match(store, Iri(EX + "nothing"))) == []


def test_literal_subject_rejected():
    with pytest.raises(TermError):
        GraphStore().add(Triple(Literal("x"), RDF_TYPE, Iri(EX + "C")))


def test_remove_keeps_indexes_consistent():
    store = GraphStore([Triple(SUBJECTS[0], PREDICATES[0], o) for o in OBJECTS])
    assert store.remove(Triple(SUBJECTS[0], PREDICATES[0], OBJECTS[0]))
    assert not store.remove(Triple(SUBJECTS[0], PREDICATES[0], OBJECTS[0]))
    assert len(store) == len(OBJECTS) - 1
    assert store.check_indexes()


def test_prefix_map_expand_compact():
    pm = PrefixMap({"ex": EX, "": BASE})
    assert resolve_curie(pm, "ex:thing") == Iri(EX + "thing")
    assert resolve_curie(pm, ":Book") == Iri(BASE + "Book")
    assert pm.compact(Iri(EX + "thing")) == "ex:thing"
    assert pm.compact(Iri("urn:x")) is None
    with pytest.raises(PrefixError):
        resolve_curie(pm, "nope:x")


def test_rebinding_prefix_warns(caplog):
    pm = PrefixMap({"ex": EX})
    with caplog.at_level(logging.WARNING):
        pm.bind("ex", "http://other.org/")
    assert pm["ex"] == "http://other.org/"
    assert pm.warnings


@settings(max_examples=300, deadline=None)
@given(st.lists(triples, max_size=40), st.lists(triples, max_size=10),
       st.sampled_from([None] + SUBJECTS), st.sampled_from([None] + PREDICATES),
       st.sampled_from([None] + OBJECTS))
def test_match_equals_linear_scan(added, removed, s, p, o):
    store = GraphStore(added)
    for t in removed:
        store.remove(t)
    expected = set(added) - set(removed)
    assert set(store) == expected
    assert len(store) == len(expected)
    got = list(store.match(s, p, o))
    assert len(got) == len(set(got))
    assert set(got) == linear_match(expected, s, p, o)
    assert store.check_indexes()


@settings(max_examples=100, deadline=None)
@given(st.lists(triples, max_size=30), st.randoms())
def test_iteration_order_independent_of_hashing(ts, rnd):
    # two stores built from the same sequence iterate identically
    assert list(GraphStore(ts)) == list(GraphStore(ts))
    shuffled = list(ts)
    rnd.shuffle(shuffled)
    assert set(GraphStore(shuffled)) == set(GraphStore(ts))
