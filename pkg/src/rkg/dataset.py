"""Loading schema and data files into stores, shared by the CLI and the endpoint."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import seed
from .inference import InferenceStats, materialize
from .schema import Metrics, SchemaIndex, compute_metrics, extract_schema
from .store import GraphStore
from .turtle import load_turtle, parse_ntriples

NTRIPLES_SUFFIXES = (".nt", ".ntriples")


def load_file(path: str | Path, store: GraphStore | None = None) -> GraphStore:
    """Read a Turtle or N-Triples file (by extension) into ``store``.

    OSError and ParseError propagate unchanged.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in NTRIPLES_SUFFIXES:
        store = store if store is not None else GraphStore()
        store.update(parse_ntriples(text))
        return store
    return load_turtle(text, store)


def load_files(paths: Iterable[str | Path]) -> GraphStore:
    store = GraphStore()
    for p in paths:
        load_file(p, store)
    return store


@dataclass
class Dataset:
    schema_store: GraphStore
    data: GraphStore
    schema: SchemaIndex
    combined: GraphStore
    inference: InferenceStats | None = None
    sources: list[str] = field(default_factory=list)

    def metrics(self) -> Metrics:
        return compute_metrics(self.schema, self.data)


def load_dataset(schema_paths: Iterable[str | Path] = (), data_paths: Iterable[str | Path] = (),
                 reason: bool = False) -> Dataset:
    """Load schema and data files; with no paths at all, the bundled seed.

    ``combined`` holds schema plus data (materialized when ``reason``) and is
    what queries run against; ``data`` keeps the asserted data only.
    """
    schema_paths, data_paths = list(schema_paths), list(data_paths)
    if not schema_paths and not data_paths:
        schema_paths = [seed.path(seed.SCHEMA_FILE)]
        data_paths = [seed.path(seed.DATA_FILE)]
    schema_store = load_files(schema_paths)
    data = load_files(data_paths)
    schema = extract_schema(GraphStore(list(schema_store) + list(data)))
    combined = schema_store.copy()
    combined.prefixes.update_from(data.prefixes)
    combined.update(data)
    stats = materialize(combined, schema) if reason else None
    return Dataset(schema_store, data, schema, combined, stats,
                   [str(p) for p in schema_paths + data_paths])
