"""Tokenizer for the mapping-expression language."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Any, List

from .errors import MappingSyntaxError

NAME, VAR, STR, NUM, BOOL, NULL, FUNC, OP, EOF = (
    "name", "var", "string", "number", "bool", "null", "function", "op", "eof",
)

_TWO_CHAR_OPS = (":=", "<=", ">=", "!=", "..")
_ONE_CHAR_OPS = ".[]{}(),:;?+-*/%&<>=!"
_WORD_OPS = {"and", "or", "in"}
_ESCAPES = {'"': '"', "'": "'", "\\": "\\", "/": "/", "b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: Any
    offset: int
    length: int

    @property
    def end(self) -> int:
        return self.offset + self.length

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        if self.kind == OP:
            return f"'{self.value}'"
        return f"{self.kind} {self.value!r}"


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise MappingSyntaxError("unterminated comment", (i, 2), source)
            i = end + 2
            continue
        if source.startswith(tuple(_TWO_CHAR_OPS), i):
            op = source[i : i + 2]
            tokens.append(Token(OP, op, i, 2))
            i += 2
            continue
        if ch in "\"'":
            value, end = _read_string(source, i)
            tokens.append(Token(STR, value, i, end - i))
            i = end
            continue
        if ch.isdigit():
            value, end = _read_number(source, i)
            tokens.append(Token(NUM, value, i, end - i))
            i = end
            continue
        if ch == "$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token(VAR, source[i + 1 : j], i, j - i))
            i = j
            continue
        if ch == "`":
            end = source.find("`", i + 1)
            if end < 0:
                raise MappingSyntaxError("unterminated backquoted name", (i, 1), source)
            tokens.append(Token(NAME, source[i + 1 : end], i, end + 1 - i))
            i = end + 1
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            if word in _WORD_OPS:
                tokens.append(Token(OP, word, i, j - i))
            elif word in ("true", "false"):
                tokens.append(Token(BOOL, word == "true", i, j - i))
            elif word == "null":
                tokens.append(Token(NULL, None, i, j - i))
            elif word == "function":
                tokens.append(Token(FUNC, word, i, j - i))
            else:
                tokens.append(Token(NAME, word, i, j - i))
            i = j
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token(OP, ch, i, 1))
            i += 1
            continue
        raise MappingSyntaxError(f"unexpected character {ch!r}", (i, 1), source)
    tokens.append(Token(EOF, None, n, 0))
    return tokens


def _read_string(source: str, start: int) -> tuple:
    quote = source[start]
    out: List[str] = []
    i = start + 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == quote:
            return "".join(out), i + 1
        if ch == "\\":
            if i + 1 >= n:
                break
            esc = source[i + 1]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                i += 2
                continue
            if esc == "u":
                hex_digits = source[i + 2 : i + 6]
                if len(hex_digits) == 4 and all(c in "0123456789abcdefABCDEF" for c in hex_digits):
                    out.append(chr(int(hex_digits, 16)))
                    i += 6
                    continue
                raise MappingSyntaxError("invalid \\u escape", (i, 2), source)
            raise MappingSyntaxError(f"invalid escape \\{esc}", (i, 2), source)
        out.append(ch)
        i += 1
    raise MappingSyntaxError("unterminated string literal", (start, 1), source)


def _read_number(source: str, start: int) -> tuple:
    n = len(source)
    i = start
    while i < n and source[i].isdigit():
        i += 1
    is_decimal = False
    if i < n and source[i] == "." and i + 1 < n and source[i + 1].isdigit():
        is_decimal = True
        i += 1
        while i < n and source[i].isdigit():
            i += 1
    if i < n and source[i] in "eE":
        j = i + 1
        if j < n and source[j] in "+-":
            j += 1
        if j < n and source[j].isdigit():
            is_decimal = True
            i = j
            while i < n and source[i].isdigit():
                i += 1
    text = source[start:i]
    value = Decimal(text) if is_decimal else int(text)
    return value, i
