"""The bundled seed dataset: schema, curated facts, bibliographic sheets,
mapping rules and competency queries."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .schema import SchemaIndex, extract_schema
from .sheetmap import ProvenanceLog, apply, load_workbook, parse_rules
from .store import WELL_KNOWN_PREFIXES, GraphStore, PrefixMap
from .turtle import load_turtle

SCHEMA_FILE = "ontobio-seed.ttl"
DATA_FILE = "rkg-seed.ttl"
CURATED_FILE = "rkg-curated.ttl"
RULES_FILE = "bibliography.rules"
NOTES_FILE = "provenance-notes.tsv"
SHEETS = {"Books List": "books.csv", "Articles List": "articles.csv"}
QUERIES = ("cq2", "cq3", "cq4", "cq5")


def data_dir() -> Path:
    return Path(str(resources.files("rkg") / "data"))


def path(name: str) -> Path:
    return data_dir() / name


def query_path(name: str) -> Path:
    return data_dir() / "queries" / f"{name}.rq"


def read(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def read_query(name: str) -> str:
    return query_path(name).read_text(encoding="utf-8")


def load_schema_store() -> GraphStore:
    return load_turtle(read(SCHEMA_FILE))


def load_schema() -> SchemaIndex:
    return extract_schema(load_schema_store())


def load_data() -> GraphStore:
    return load_turtle(read(DATA_FILE))


def load_store() -> GraphStore:
    """Schema and data in one store, as the query commands see them."""
    store = load_schema_store()
    load_turtle(read(DATA_FILE), store)
    return store


def build_bibliography(schema: SchemaIndex | None = None) -> tuple[GraphStore, ProvenanceLog]:
    schema = schema if schema is not None else load_schema()
    wb = load_workbook({sheet: read(f) for sheet, f in SHEETS.items()})
    return apply(parse_rules(read(RULES_FILE)), wb, PrefixMap(WELL_KNOWN_PREFIXES), schema)


def build_data() -> GraphStore:
    """Curated facts plus the generated bibliography; rkg-seed.ttl is this
    graph serialized."""
    store = GraphStore(prefixes=WELL_KNOWN_PREFIXES)
    load_turtle(read(CURATED_FILE), store)
    generated, _ = build_bibliography()
    store.update(generated)
    return store


def provenance_notes() -> dict[str, str]:
    notes = {}
    for line in read(NOTES_FILE).split("\n"):
        if line and not line.startswith("#"):
            subject, source = line.split("\t", 1)
            notes[subject] = source
    return notes
