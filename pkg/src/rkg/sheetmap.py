"""Spreadsheet-to-graph transformation rules.

Rule files hold one rule per block::

    # Book addition rules
    RULE books B:B rows 3..+
    Individual: @B* Types: Book
      Facts: dcterms:creator @C*, dcterms:title @D*(xsd:string)

The header names the sheet (double-quote it if it contains spaces), the
column span and the row range; ``+`` as end row means "through the last
non-empty row of the span". A trailing ``disabled`` keeps the rule in the
set without applying it. ``#`` lines inside a block become the rule comment.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

from ._lex import Lexer, ParseError, Token, TokenStream
from .schema import ANNOTATION, DATA, OBJECT, SchemaIndex
from .store import GraphStore, PrefixError, resolve_curie
from .terms import BASE, RDF_TYPE, XSD_STRING, Iri, Literal, Triple

OPEN = None


def column_index(letters: str) -> int:
    """'A' -> 1, 'Z' -> 26, 'AA' -> 27."""
    n = 0
    for ch in letters.upper():
        if not "A" <= ch <= "Z":
            raise ValueError(f"bad column {letters!r}")
        n = n * 26 + (ord(ch) - 64)
    return n


def column_letters(index: int) -> str:
    out = ""
    while index:
        index, rem = divmod(index - 1, 26)
        out = chr(65 + rem) + out
    return out


# -- workbook ----------------------------------------------------------------

class Sheet:
    """Grid of trimmed cells addressed by 1-based row and column letters."""

    def __init__(self, name: str, rows: list[list[str]]):
        self.name = name
        self.rows = rows
        self.width = max((len(r) for r in rows), default=0)

    def __len__(self):
        return len(self.rows)

    def cell(self, column: str, row: int) -> str:
        if row < 1 or row > len(self.rows):
            return ""
        cells = self.rows[row - 1]
        i = column_index(column)
        return cells[i - 1] if i <= len(cells) else ""

    def last_nonempty_row(self, start_col: str, end_col: str) -> int:
        lo, hi = column_index(start_col), column_index(end_col)
        for r in range(len(self.rows), 0, -1):
            if any(c for c in self.rows[r - 1][lo - 1:hi]):
                return r
        return 0


@dataclass
class Workbook:
    sheets: dict[str, Sheet] = field(default_factory=dict)

    def __getitem__(self, name: str) -> Sheet:
        return self.sheets[name]

    def __contains__(self, name):
        return name in self.sheets


class CsvError(ValueError):
    def __init__(self, sheet: str, line: int, message: str):
        self.sheet, self.line = sheet, line
        super().__init__(f"{sheet}: line {line}: {message}")


def parse_csv(text: str, name: str = "sheet") -> Sheet:
    reader = csv.reader(io.StringIO(text), strict=True)
    rows = []
    try:
        for row in reader:
            rows.append([c.strip() for c in row])
    except csv.Error as e:
        raise CsvError(name, reader.line_num, str(e)) from None
    width = max((len(r) for r in rows), default=0)
    for r in rows:
        r.extend([""] * (width - len(r)))
    return Sheet(name, rows)


def load_workbook(files: dict[str, str]) -> Workbook:
    """Build a workbook from ``{sheet name: CSV text}``."""
    return Workbook({name: parse_csv(text, name) for name, text in files.items()})


# -- rule language -----------------------------------------------------------

@dataclass(frozen=True)
class ValueSpec:
    column: str
    datatype: str | None = None
    lang: str | None = None


@dataclass
class Rule:
    sheet: str
    start_column: str
    end_column: str
    start_row: int
    end_row: int | None
    individual: ValueSpec
    types: list[str] = field(default_factory=list)
    facts: list[tuple[str, ValueSpec]] = field(default_factory=list)
    annotations: list[tuple[str, ValueSpec]] = field(default_factory=list)
    comment: str | None = None
    enabled: bool = True
    line: int = 0


RuleSet = list

_HEADER = re.compile(
    r'^RULE\s+(?:"(?P<qsheet>[^"]+)"|(?P<sheet>\S+))\s+(?P<c1>[A-Z]+):(?P<c2>[A-Z]+)'
    r"\s+rows\s+(?P<r1>\d+)\.\.(?P<r2>\d+|\+)(?:\s+(?P<flag>disabled))?\s*$"
)

_BODY = Lexer([
    ("WS", r"\s+"),
    ("SECTION", r"(?:Individual|Types|Facts|Annotations):(?![\w])"),
    ("CELL", r"@[A-Za-z]+\*"),
    ("BADCELL", r"@[^\s,()]*"),
    ("QUAL", r"\((?:[^()\"]|\"[^\"]*\")*\)"),
    ("CURIE", r"(?:[A-Za-z][\w.-]*)?:[\w.-]*[\w-]|(?:[A-Za-z][\w.-]*)?:"),
    ("NAME", r"[A-Za-z_][\w.-]*"),
    ("COMMA", r","),
])
_LANG_QUAL = re.compile(r'^xml:lang\s*=\s*"([A-Za-z]+(?:-[A-Za-z0-9]+)*)"$')


def parse_rules(text: str) -> RuleSet:
    rules: RuleSet = []
    block: list[tuple[int, str]] = []

    def flush():
        if block:
            rule = _parse_block(block)
            if rule is not None:
                rules.append(rule)
            block.clear()

    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip()
        if not line.strip():
            flush()
            continue
        if line.lstrip().startswith("RULE") and block and any(
                not l.lstrip().startswith("#") for _, l in block):
            flush()
        block.append((lineno, line))
    flush()
    return rules


def parse_rule_body(text: str) -> Rule:
    """Parse a bare rule body (no header); sheet and span default to the
    individual column, rows 1..+."""
    lines = [(n, l) for n, l in enumerate(text.split("\n"), 1) if l.strip()]
    if not lines:
        raise ParseError("empty rule body", 1, 1, "")
    individual, types, facts, annotations = _parse_body(lines)
    return Rule("", individual.column, individual.column, 1, OPEN, individual,
                types, facts, annotations)


def _parse_block(block: list[tuple[int, str]]) -> Rule | None:
    comments = [l.lstrip()[1:].strip() for _, l in block if l.lstrip().startswith("#")]
    lines = [(n, l) for n, l in block if not l.lstrip().startswith("#")]
    if not lines:
        return None
    hline, header = lines[0]
    m = _HEADER.match(header.strip())
    if m is None:
        raise ParseError("malformed RULE header", hline, 1, header.strip()[:40])
    start_row = int(m["r1"])
    end_row = OPEN if m["r2"] == "+" else int(m["r2"])
    if start_row < 1:
        raise ParseError("start row must be >= 1", hline, 1, m["r1"])
    if end_row is not None and end_row < start_row:
        raise ParseError("end row precedes start row", hline, 1, m["r2"])
    if column_index(m["c2"]) < column_index(m["c1"]):
        raise ParseError("end column precedes start column", hline, 1, f"{m['c1']}:{m['c2']}")
    body_lines = lines[1:]
    if not body_lines:
        raise ParseError("rule has no body", hline, len(header) + 1, "")
    individual, types, facts, annotations = _parse_body(body_lines)
    return Rule(
        sheet=m["qsheet"] or m["sheet"], start_column=m["c1"], end_column=m["c2"],
        start_row=start_row, end_row=end_row, individual=individual, types=types,
        facts=facts, annotations=annotations,
        comment=" ".join(comments) or None, enabled=m["flag"] is None, line=hline,
    )


def _tokenize_body(lines):
    tokens = []
    for lineno, text in lines:
        try:
            toks = _BODY.tokenize(text)[:-1]
        except ParseError as e:
            raise ParseError(e.message, lineno, e.column, e.excerpt) from None
        for t in toks:
            t.line = lineno
        tokens.extend(toks)
    last_line, last_text = lines[-1]
    tokens.append(Token("EOF", "", last_line, len(last_text) + 1, 0))
    return TokenStream(tokens)


def _parse_body(lines):
    ts = _tokenize_body(lines)
    tok = ts.peek
    if not (tok.kind == "SECTION" and tok.value == "Individual:"):
        raise ts.error("rule body must start with 'Individual:'")
    ts.next()
    individual = _value_spec(ts)
    types: list[str] = []
    facts: list = []
    annotations: list = []
    seen = set()
    while not ts.at("EOF"):
        tok = ts.peek
        if tok.kind != "SECTION":
            raise ts.error("unknown section keyword" if tok.kind == "NAME" else "expected section")
        if tok.value == "Individual:" or tok.value in seen:
            raise ts.error(f"duplicate section {tok.value}")
        seen.add(tok.value)
        ts.next()
        if tok.value == "Types:":
            types.extend(_ref_list(ts))
        elif tok.value == "Facts:":
            facts.extend(_fact_list(ts))
        else:
            annotations.extend(_fact_list(ts))
    return individual, types, facts, annotations


def _ref(ts) -> str:
    tok = ts.peek
    if tok.kind in ("CURIE", "NAME"):
        ts.next()
        return tok.value
    raise ts.error("expected class or property name")


def _ref_list(ts) -> list[str]:
    refs = [_ref(ts)]
    while ts.accept("COMMA"):
        refs.append(_ref(ts))
    return refs


def _fact_list(ts) -> list[tuple[str, ValueSpec]]:
    out = [(_ref(ts), _value_spec(ts))]
    while ts.accept("COMMA"):
        out.append((_ref(ts), _value_spec(ts)))
    return out


def _value_spec(ts) -> ValueSpec:
    tok = ts.peek
    if tok.kind == "BADCELL":
        raise ts.error("malformed cell reference (expected @<column>*)")
    if tok.kind != "CELL":
        raise ts.error("expected cell reference")
    ts.next()
    column = tok.value[1:-1].upper()
    qual = ts.accept("QUAL")
    if qual is None:
        return ValueSpec(column)
    inner = qual.value[1:-1].strip()
    m = _LANG_QUAL.match(inner)
    if m:
        return ValueSpec(column, lang=m.group(1))
    if re.match(r"^(?:[A-Za-z][\w.-]*)?:[\w.-]+$", inner):
        return ValueSpec(column, datatype=inner)
    raise ts.error("qualifier must be a datatype CURIE or xml:lang=\"..\"", qual)


# -- application -------------------------------------------------------------

_NAME_DROP = re.compile(r"[^\w.-]", re.ASCII)


def local_name(text: str) -> str:
    """Cell text -> IRI local part: trim, whitespace runs to '_', drop the rest."""
    return _NAME_DROP.sub("", re.sub(r"\s+", "_", text.strip()))


def individual_iri(text: str, base: str = BASE) -> Iri | None:
    local = local_name(text)
    return Iri(base + local) if local else None


@dataclass
class ProvenanceEntry:
    rule: int
    sheet: str
    row: int
    individual: str | None = None
    triples: list[Triple] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "sheet": self.sheet,
            "row": self.row,
            "individual": self.individual,
            "triples": [t.n3() for t in self.triples],
            "skipped": self.skipped,
        }


@dataclass
class ProvenanceLog:
    entries: list[ProvenanceEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def emitted(self) -> list[Triple]:
        return [t for e in self.entries for t in e.triples]

    def generated_individuals(self, rule: int | None = None) -> set[str]:
        """Individuals whose row emitted at least one triple."""
        return {e.individual for e in self.entries
                if e.triples and e.individual and (rule is None or e.rule == rule)}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict(), ensure_ascii=False) + "\n" for e in self.entries)


class MappingError(ValueError):
    pass


def apply(rules: RuleSet, wb: Workbook, pm: dict, schema: SchemaIndex | None = None,
          base: str | None = None) -> tuple[GraphStore, ProvenanceLog]:
    """Run ``rules`` over ``wb`` and return the generated graph plus its provenance."""
    base = base if base is not None else pm.get("", BASE)
    store = GraphStore(prefixes=pm)
    log = ProvenanceLog()
    for i, rule in enumerate(rules):
        if not rule.enabled:
            continue
        if rule.sheet not in wb:
            raise MappingError(f"rule {i} (line {rule.line}): no sheet named {rule.sheet!r}")
        sheet = wb[rule.sheet]
        last = rule.end_row
        if last is OPEN:
            last = sheet.last_nonempty_row(rule.start_column, rule.end_column)
        for row in range(rule.start_row, last + 1):
            entry = _apply_row(i, rule, sheet, row, pm, schema, base, log)
            for t in entry.triples:
                store.add(t)
            log.entries.append(entry)
    return store, log


def _resolve(ref: str, pm: dict) -> Iri:
    return resolve_curie(pm, ref if ":" in ref else ":" + ref)


def _apply_row(i, rule, sheet, row, pm, schema, base, log) -> ProvenanceEntry:
    entry = ProvenanceEntry(i, sheet.name, row)
    ind_text = sheet.cell(rule.individual.column, row)
    subject = individual_iri(ind_text, base)
    if subject is None:
        entry.skipped.append({"clause": "Individual", "reason": "empty individual cell"})
        return entry
    entry.individual = subject.value

    def skip(clause, reason):
        entry.skipped.append({"clause": clause, "reason": reason})

    for ref in rule.types:
        try:
            entry.triples.append(Triple(subject, RDF_TYPE, _resolve(ref, pm)))
        except PrefixError as e:
            skip(f"Types: {ref}", str(e))
    for section, clauses in (("Facts", rule.facts), ("Annotations", rule.annotations)):
        for ref, spec in clauses:
            clause = f"{section}: {ref} @{spec.column}*"
            try:
                prop = _resolve(ref, pm)
            except PrefixError as e:
                skip(clause, str(e))
                continue
            text = sheet.cell(spec.column, row)
            if not text:
                skip(clause, "empty cell")
                continue
            try:
                obj = _object_for(prop, text, spec, pm, schema, base, section, log, sheet, row)
            except (PrefixError, ValueError) as e:
                skip(clause, str(e))
                continue
            if obj is None:
                skip(clause, "cell text yields an empty IRI")
                continue
            entry.triples.append(Triple(subject, prop, obj))
    if not rule.types and not rule.facts and not rule.annotations:
        skip("Individual", "bare individual clause; nothing emitted")
    return entry


def _object_for(prop, text, spec, pm, schema, base, section, log, sheet, row):
    if spec.lang is not None:
        return Literal(text, lang=spec.lang)
    if spec.datatype is not None:
        return Literal(text, resolve_curie(pm, spec.datatype))
    kind = schema.kind(prop) if schema is not None else None
    if kind == OBJECT:
        return individual_iri(text, base)
    if kind in (DATA, ANNOTATION) or section == "Annotations":
        return Literal(text, XSD_STRING)
    log.warnings.append(f"{sheet.name} row {row}: undeclared property {prop.value}; "
                        f"emitting a plain literal")
    return Literal(text, XSD_STRING)
