import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkg import seed
from rkg.schema import (
    ANNOTATION, DATA, ERROR, FACETS, OBJECT, SchemaError, compute_metrics, extract_schema, validate,
)
from rkg.store import GraphStore
from rkg.terms import (
    BASE, OWL_CLASS, OWL_DISJOINTWITH, OWL_OBJECTPROPERTY, RDF_TYPE, RDFS_SUBCLASSOF, Iri, Literal,
    Triple,
)
from rkg.turtle import load_turtle

FOAF = "http://xmlns.com/foaf/0.1/"
PERSON, AGENT, ORG = Iri(FOAF + "Person"), Iri(FOAF + "Agent"), Iri(FOAF + "Organization")

SMALL = """
@prefix : <https://w3id.org/ontobio#> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
foaf:Agent a owl:Class .
foaf:Person a owl:Class ; rdfs:subClassOf foaf:Agent ; owl:disjointWith foaf:Organization .
foaf:Organization a owl:Class ; rdfs:subClassOf foaf:Agent .
:Degree a owl:Class .
:hasDegree a owl:ObjectProperty ; rdfs:domain foaf:Person ; rdfs:range :Degree .
:degreeAwardedBy a owl:ObjectProperty ; rdfs:range foaf:Organization .
:awardYear a owl:DatatypeProperty ; rdfs:range xsd:string .
:note a owl:AnnotationProperty .
"""


@pytest.fixture(scope="module")
def small():
    return extract_schema(load_turtle(SMALL))


def test_extract_small_schema(small):
    assert small.ancestors(PERSON) == {AGENT}
    assert small.disjoint(PERSON, ORG) and small.disjoint(ORG, PERSON)
    assert small.kind(Iri(BASE + "hasDegree")) == OBJECT
    assert small.kind(Iri(BASE + "awardYear")) == DATA
    assert small.kind(Iri(BASE + "note")) == ANNOTATION


def test_subclass_cycle_is_an_error():
    store = GraphStore([Triple(Iri(BASE + "A"), RDFS_SUBCLASSOF, Iri(BASE + "B")),
                        Triple(Iri(BASE + "B"), RDFS_SUBCLASSOF, Iri(BASE + "A"))])
    with pytest.raises(SchemaError):
        extract_schema(store)


def test_conflicting_property_kind_is_an_error():
    store = load_turtle(SMALL + ":awardYear a owl:ObjectProperty .")
    with pytest.raises(SchemaError):
        extract_schema(store)


def test_seed_facets_cover_all_aspects():
    schema = seed.load_schema()
    for facet in FACETS:
        assert schema.facet_members(facet), facet
    assert Iri(BASE + "Degree") in schema.facet_members("Achievements")
    assert Iri(BASE + "FoodHabit") in schema.facet_members("Personality")


def test_metrics_of_empty_store():
    m = compute_metrics(extract_schema(GraphStore()), GraphStore())
    assert set(m.to_dict().values()) == {0}


def _data(ttl):
    return load_turtle("@prefix : <https://w3id.org/ontobio#> .\n"
                       "@prefix foaf: <http://xmlns.com/foaf/0.1/> .\n" + ttl)


def test_validate_clean_data(small):
    data = _data(':SR a foaf:Person ; :hasDegree :BA . :BA :awardYear "1913" .')
    assert not validate(data, small).errors


def test_validate_literal_in_object_property(small):
    report = validate(_data(':SR :hasDegree "BA" .'), small)
    assert [v.kind for v in report.errors] == ["range-mismatch"]


def test_validate_domain_disjoint_with_subject_type(small):
    report = validate(_data(':ISI a foaf:Organization ; :hasDegree :X .'), small)
    assert [v.kind for v in report.errors] == ["domain-mismatch"]


def test_validate_disjoint_membership(small):
    report = validate(_data(":X a foaf:Person, foaf:Organization ."), small)
    assert [v.kind for v in report.errors] == ["disjointness-clash"]


def test_validate_undeclared_property_is_a_warning(small):
    report = validate(_data(":X :unknown :Y ."), small)
    assert not report.errors and [v.kind for v in report.warnings] == ["undeclared-property"]
    assert len(validate(_data(":X :unknown :Y ."), small, severity=ERROR)) == 0


def test_validate_datatype_mismatch(small):
    report = validate(_data(':X :awardYear "1913"^^<http://www.w3.org/2001/XMLSchema#integer> .'),
                      small)
    assert [v.kind for v in report.errors] == ["datatype-mismatch"]


# strict ancestors against a brute-force reachability search on random DAGs

@st.composite
def dags(draw):
    n = draw(st.integers(1, 9))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                         .filter(lambda e: e[0] < e[1]), max_size=20))
    perm = draw(st.permutations(range(n)))
    return n, {(perm[a], perm[b]) for a, b in edges}


def _reach(n, edges, start):
    seen, todo = set(), [start]
    while todo:
        x = todo.pop()
        for a, b in edges:
            if a == x and b not in seen:
                seen.add(b)
                todo.append(b)
    return seen


@settings(max_examples=300, deadline=None)
@given(dags())
def test_ancestors_match_reachability(dag):
    n, edges = dag
    cls = [Iri(f"{BASE}C{i}") for i in range(n)]
    store = GraphStore([Triple(c, RDF_TYPE, OWL_CLASS) for c in cls]
                       + [Triple(cls[a], RDFS_SUBCLASSOF, cls[b]) for a, b in edges])
    schema = extract_schema(store)
    for i in range(n):
        assert schema.ancestors(cls[i]) == {cls[j] for j in _reach(n, edges, i)}


@settings(max_examples=100, deadline=None)
@given(dags(), st.integers(0, 8), st.integers(0, 8))
def test_disjointness_is_symmetric(dag, a, b):
    n, edges = dag
    a, b = a % n, b % n
    cls = [Iri(f"{BASE}C{i}") for i in range(n)]
    store = GraphStore([Triple(cls[x], RDFS_SUBCLASSOF, cls[y]) for x, y in edges]
                       + [Triple(cls[a], OWL_DISJOINTWITH, cls[b]), Triple(cls[0], RDF_TYPE, OWL_CLASS)])
    schema = extract_schema(store)
    assert schema.disjoint(cls[a], cls[b]) and schema.disjoint(cls[b], cls[a])


def test_inverse_index_is_symmetric():
    store = load_turtle(SMALL + ":hasChild a owl:ObjectProperty ; owl:inverseOf :hasParent ."
                                " :hasParent a owl:ObjectProperty .")
    schema = extract_schema(store)
    assert schema.inverse[Iri(BASE + "hasChild")] == {Iri(BASE + "hasParent")}
    assert schema.inverse[Iri(BASE + "hasParent")] == {Iri(BASE + "hasChild")}


def test_inverse_on_data_property_is_an_error():
    with pytest.raises(SchemaError):
        extract_schema(load_turtle(SMALL + ":awardYear owl:inverseOf :hasDegree ."))


def test_kind_of_unknown_property_is_none(small):
    assert small.kind(Iri(BASE + "nothing")) is None
    assert OWL_OBJECTPROPERTY not in small.classes
    assert Literal("x") not in small.classes
