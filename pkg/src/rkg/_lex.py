"""Regex tokenizer shared by the Turtle and SPARQL parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    """Syntax error with a 1-based line/column and the offending text."""

    def __init__(self, message: str, line: int = 0, column: int = 0, excerpt: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.excerpt = excerpt
        super().__init__(str(self))

    def __str__(self):
        loc = f"line {self.line}, column {self.column}: " if self.line else ""
        near = f" near {self.excerpt!r}" if self.excerpt else ""
        return f"{loc}{self.message}{near}"


@dataclass(slots=True)
class Token:
    kind: str
    value: str
    line: int
    col: int
    pos: int


class Lexer:
    def __init__(self, spec: list[tuple[str, str]], flags=0):
        self.regex = re.compile("|".join(f"(?P<{k}>{p})" for k, p in spec), flags)

    def tokenize(self, text: str) -> list[Token]:
        tokens = []
        pos, line, line_start = 0, 1, 0
        n = len(text)
        while pos < n:
            m = self.regex.match(text, pos)
            if m is None:
                raise ParseError("unexpected character", line, pos - line_start + 1,
                                 text[pos:pos + 20].split("\n")[0])
            kind = m.lastgroup
            value = m.group()
            if kind not in ("WS", "COMMENT"):
                tokens.append(Token(kind, value, line, pos - line_start + 1, pos))
            nl = value.count("\n")
            if nl:
                line += nl
                line_start = pos + value.rindex("\n") + 1
            pos = m.end()
        tokens.append(Token("EOF", "", line, pos - line_start + 1, pos))
        return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def lookahead(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek
        return ParseError(message, tok.line, tok.col, tok.value or "<end of input>")

    def at(self, kind: str, value: str | None = None, ci: bool = False) -> bool:
        tok = self.peek
        if tok.kind != kind:
            return False
        if value is None:
            return True
        return tok.value.upper() == value.upper() if ci else tok.value == value

    def accept(self, kind: str, value: str | None = None, ci: bool = False) -> Token | None:
        if self.at(kind, value, ci):
            return self.next()
        return None

    def expect(self, kind: str, value: str | None = None, ci: bool = False,
               what: str | None = None) -> Token:
        if self.at(kind, value, ci):
            return self.next()
        raise self.error(f"expected {what or value or kind}")
