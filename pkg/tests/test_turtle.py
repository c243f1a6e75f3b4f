import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkg import seed
from rkg._lex import ParseError
from rkg.store import GraphStore
from rkg.terms import BASE, RDF_TYPE, XSD, BlankNode, Iri, Literal, Triple
from rkg.turtle import (
    load_turtle, parse_ntriples, parse_turtle, serialize_ntriples, serialize_turtle,
)

EX = "http://example.org/"


def test_abbreviations():
    triples, declared = parse_turtle("""
        @prefix ex: <http://example.org/> .
        PREFIX foaf: <http://xmlns.com/foaf/0.1/>
        ex:a a foaf:Person ; ex:name "A", "B"@en ; ex:age 42 ; ex:ok true ;
             ex:knows [ ex:name "anon" ] .
    """)
    assert declared["ex"] == EX
    a = Iri(EX + "a")
    assert Triple(a, RDF_TYPE, Iri("http://xmlns.com/foaf/0.1/Person")) in triples
    assert Triple(a, Iri(EX + "name"), Literal("B", lang="en")) in triples
    assert Triple(a, Iri(EX + "age"), Literal("42", Iri(XSD + "integer"))) in triples
    assert Triple(a, Iri(EX + "ok"), Literal("true", Iri(XSD + "boolean"))) in triples
    assert len(triples) == 7


def test_default_prefix_is_ontobio_namespace():
    triples, _ = parse_turtle(':SRRanganathan :awardYear "1909" .')
    assert triples[0].subject == Iri(BASE + "SRRanganathan")


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_turtle('@prefix ex: <http://example.org/> .\nex:a ex:b .')
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_turtle('undeclared:a undeclared:b undeclared:c .')


def test_escapes_round_trip():
    store = GraphStore([Triple(Iri(EX + "s"), Iri(EX + "p"), Literal('line\nbreak "quoted" \\ tab\t'))])
    assert set(load_turtle(serialize_turtle(store))) == set(store)
    assert set(parse_ntriples(serialize_ntriples(store))) == set(store)


def test_ntriples_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_ntriples('<http://e/a> <http://e/b> <http://e/c> .\nnot a triple\n')
    assert info.value.line == 2


def test_seed_round_trip_both_formats():
    store = seed.load_store()
    ttl = serialize_turtle(store)
    nt = serialize_ntriples(store)
    assert set(load_turtle(ttl)) == set(store)
    assert set(parse_ntriples(nt)) == set(store)
    assert serialize_turtle(load_turtle(ttl)) == ttl
    assert serialize_ntriples(GraphStore(parse_ntriples(nt))) == nt


def test_bundled_seed_file_is_serializer_output():
    # rkg-seed.ttl is exactly the canonical serialization of curated + generated data
    assert seed.read(seed.DATA_FILE) == serialize_turtle(seed.build_data())


names = st.sampled_from([Iri(EX + n) for n in ("a", "b", "c.d", "e-f", "1x")]
                        + [Iri("urn:x:y"), BlankNode("n1")])
literals = st.builds(Literal, st.text(max_size=8)) | st.builds(
    lambda s, tag: Literal(s, lang=tag), st.text(max_size=5), st.sampled_from(["en", "fr-ca"])) | \
    st.builds(lambda v: Literal(str(v), Iri(XSD + "integer")), st.integers(-50, 50))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.builds(Triple, names, st.sampled_from([Iri(EX + "p"), RDF_TYPE]),
                          names | literals), max_size=25))
def test_random_graphs_round_trip(ts):
    store = GraphStore(ts, prefixes={"ex": EX})
    assert set(load_turtle(serialize_turtle(store))) == set(store)
    assert set(parse_ntriples(serialize_ntriples(store))) == set(store)
    # serialization depends only on the triple set
    assert serialize_turtle(GraphStore(reversed(ts), prefixes={"ex": EX})) == serialize_turtle(store)
