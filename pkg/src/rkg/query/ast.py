from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..store import PrefixMap
from ..terms import Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return "?" + self.name


PatternTerm = Union[Term, Var]


@dataclass(frozen=True)
class TriplePattern:
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm

    def variables(self) -> list[Var]:
        return [x for x in (self.s, self.p, self.o) if isinstance(x, Var)]


@dataclass
class GroupPattern:
    elements: list = field(default_factory=list)

    def triple_count(self) -> int:
        return sum(isinstance(e, TriplePattern) for e in self.elements)


@dataclass
class OptionalPattern:
    group: GroupPattern


@dataclass
class UnionPattern:
    left: GroupPattern
    right: GroupPattern


@dataclass
class Filter:
    expr: "Expression"


# -- expressions ---------------------------------------------------------------

@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Bound:
    var: Var


@dataclass(frozen=True)
class And:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Or:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Not:
    expr: "Expression"


Expression = Union[Compare, Bound, And, Or, Not, Var, Term]


@dataclass
class Query:
    prefixes: PrefixMap
    pattern: GroupPattern
    projection: list[Var] | None = None
    distinct: bool = False
    order_by: list[tuple[Var, bool]] = field(default_factory=list)
    limit: int | None = None
    offset: int | None = None

    def header(self) -> list[str]:
        if self.projection is not None:
            return [v.name for v in self.projection]
        return in_scope(self.pattern)


def in_scope(group: GroupPattern) -> list[str]:
    """Variables of a group in order of first appearance (the SELECT * header)."""
    seen: dict[str, None] = {}

    def walk(g):
        for e in g.elements:
            if isinstance(e, TriplePattern):
                for v in e.variables():
                    seen.setdefault(v.name)
            elif isinstance(e, OptionalPattern):
                walk(e.group)
            elif isinstance(e, UnionPattern):
                walk(e.left)
                walk(e.right)
            elif isinstance(e, GroupPattern):
                walk(e)

    walk(group)
    return list(seen)
