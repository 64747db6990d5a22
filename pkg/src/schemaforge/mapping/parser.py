"""Recursive-descent / Pratt parser producing spanned AST nodes."""

from __future__ import annotations

from dataclasses import replace
from typing import List

from .errors import MappingSyntaxError
from .lexer import BOOL, EOF, FUNC, NAME, NULL, NUM, OP, STR, VAR, Token, tokenize
from .nodes import (
    ArrayCtor,
    Bind,
    Binary,
    Block,
    Call,
    Conditional,
    ContextRef,
    ExprStep,
    Filter,
    Lambda,
    Literal,
    MappingAst,
    NameStep,
    ObjectCtor,
    Path,
    Unary,
    VarRef,
    WildcardStep,
)

_BINDING_POWER = {
    ":=": 10,
    "?": 20,
    "..": 20,
    "or": 25,
    "and": 30,
    "=": 40, "!=": 40, "<": 40, "<=": 40, ">": 40, ">=": 40, "in": 40,
    "&": 50, "+": 50, "-": 50,
    "*": 60, "/": 60, "%": 60,
    ".": 75,
    "[": 80, "(": 80,
}

_SIMPLE_BINARY = {
    "..", "or", "and", "=", "!=", "<", "<=", ">", ">=", "in", "&", "+", "-", "*", "/", "%",
}

_PATH_BP = 75
_UNARY_BP = 70
_MAX_DEPTH = 256


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens: List[Token] = tokenize(source)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, message: str, token: Token | None = None):
        token = token or self.current
        raise MappingSyntaxError(
            f"{message}, found {token.describe()}", (token.offset, token.length or 1), self.source
        )

    def expect_op(self, op: str) -> Token:
        token = self.current
        if token.kind != OP or token.value != op:
            self.fail(f"expected '{op}'")
        return self.advance()

    def _bp(self, token: Token) -> int:
        if token.kind == OP:
            return _BINDING_POWER.get(token.value, 0)
        return 0

    def parse(self) -> "MappingAst":
        expr = self.parse_expr(0, 0)
        if self.current.kind != EOF:
            self.fail("expected end of input")
        return MappingAst(root=expr, source=self.source)

    def parse_expr(self, min_bp: int, depth: int):
        if depth > _MAX_DEPTH:
            raise MappingSyntaxError(
                "expression nesting too deep", (self.current.offset, 1), self.source
            )
        left = self.nud(depth)
        while self._bp(self.current) > min_bp:
            left = self.led(left, depth)
        return left

    # ------------------------------------------------------------------ nud

    def nud(self, depth: int):
        token = self.current
        if token.kind in (NUM, STR, BOOL, NULL):
            self.advance()
            return Literal(token.value, span=(token.offset, token.length))
        if token.kind == NAME:
            self.advance()
            step = NameStep(token.value, span=(token.offset, token.length))
            return Path(None, (step,), span=(token.offset, token.length))
        if token.kind == VAR:
            self.advance()
            if token.value == "":
                return ContextRef(span=(token.offset, token.length))
            return VarRef(token.value, span=(token.offset, token.length))
        if token.kind == FUNC:
            return self.parse_lambda(depth)
        if token.kind == OP:
            if token.value == "*":
                self.advance()
                step = WildcardStep(span=(token.offset, token.length))
                return Path(None, (step,), span=(token.offset, token.length))
            if token.value == "-":
                self.advance()
                operand = self.parse_expr(_UNARY_BP, depth + 1)
                return Unary("-", operand, span=(token.offset, _end(operand) - token.offset))
            if token.value == "[":
                return self.parse_array(depth)
            if token.value == "{":
                return self.parse_object(depth)
            if token.value == "(":
                return self.parse_block(depth)
        self.fail("expected expression")

    def parse_array(self, depth: int) -> ArrayCtor:
        start = self.expect_op("[")
        items = []
        if not self._at_op("]"):
            items.append(self.parse_expr(0, depth + 1))
            while self._at_op(","):
                self.advance()
                items.append(self.parse_expr(0, depth + 1))
        end = self.expect_op("]")
        return ArrayCtor(tuple(items), span=_span(start, end))

    def parse_object(self, depth: int) -> ObjectCtor:
        start = self.expect_op("{")
        entries = []
        if not self._at_op("}"):
            entries.append(self.parse_entry(depth))
            while self._at_op(","):
                self.advance()
                entries.append(self.parse_entry(depth))
        end = self.expect_op("}")
        return ObjectCtor(tuple(entries), span=_span(start, end))

    def parse_entry(self, depth: int) -> tuple:
        key = self.parse_expr(0, depth + 1)
        self.expect_op(":")
        value = self.parse_expr(0, depth + 1)
        return (key, value)

    def parse_block(self, depth: int) -> Block:
        start = self.expect_op("(")
        exprs = [self.parse_expr(0, depth + 1)]
        while self._at_op(";"):
            self.advance()
            if self._at_op(")"):
                break
            exprs.append(self.parse_expr(0, depth + 1))
        end = self.expect_op(")")
        return Block(tuple(exprs), span=_span(start, end))

    def parse_lambda(self, depth: int) -> Lambda:
        start = self.advance()  # consume 'function'
        self.expect_op("(")
        params = []
        if not self._at_op(")"):
            params.append(self._param())
            while self._at_op(","):
                self.advance()
                params.append(self._param())
        self.expect_op(")")
        self.expect_op("{")
        body = self.parse_expr(0, depth + 1)
        end = self.expect_op("}")
        return Lambda(tuple(params), body, span=_span(start, end))

    def _param(self) -> str:
        token = self.current
        if token.kind != VAR or token.value == "":
            self.fail("expected parameter like $name")
        self.advance()
        return token.value

    # ------------------------------------------------------------------ led

    def led(self, left, depth: int):
        token = self.advance()
        op = token.value
        if op in _SIMPLE_BINARY:
            right = self.parse_expr(_BINDING_POWER[op], depth + 1)
            return Binary(op, left, right, span=(_start(left), _end(right) - _start(left)))
        if op == ":=":
            if not isinstance(left, VarRef):
                self.fail("the left side of := must be a variable like $name", token)
            right = self.parse_expr(_BINDING_POWER[":="] - 1, depth + 1)
            return Bind(left.name, right, span=(_start(left), _end(right) - _start(left)))
        if op == "?":
            then = self.parse_expr(0, depth + 1)
            orelse = None
            if self._at_op(":"):
                self.advance()
                orelse = self.parse_expr(0, depth + 1)
            last = orelse if orelse is not None else then
            return Conditional(left, then, orelse, span=(_start(left), _end(last) - _start(left)))
        if op == ".":
            step = self.parse_step(depth)
            end = _end(step)
            if isinstance(left, Path):
                return replace(left, steps=left.steps + (step,), span=(_start(left), end - _start(left)))
            return Path(left, (step,), span=(_start(left), end - _start(left)))
        if op == "[":
            predicate = self.parse_expr(0, depth + 1)
            close = self.expect_op("]")
            if isinstance(left, Path) and left.steps:
                last_step = left.steps[-1]
                new_step = replace(
                    last_step,
                    predicates=last_step.predicates + (predicate,),
                    span=(_start(last_step), close.end - _start(last_step)),
                )
                return replace(
                    left,
                    steps=left.steps[:-1] + (new_step,),
                    span=(_start(left), close.end - _start(left)),
                )
            return Filter(left, predicate, span=(_start(left), close.end - _start(left)))
        if op == "(":
            if not isinstance(left, (VarRef, Lambda, Block, Call)):
                self.fail("this expression cannot be called as a function", token)
            args = []
            if not self._at_op(")"):
                args.append(self.parse_expr(0, depth + 1))
                while self._at_op(","):
                    self.advance()
                    args.append(self.parse_expr(0, depth + 1))
            close = self.expect_op(")")
            return Call(left, tuple(args), span=(_start(left), close.end - _start(left)))
        self.fail(f"unexpected operator '{op}'", token)

    def parse_step(self, depth: int):
        token = self.current
        if token.kind == NAME:
            self.advance()
            return NameStep(token.value, span=(token.offset, token.length))
        if token.kind == STR:
            self.advance()
            return NameStep(token.value, span=(token.offset, token.length))
        if token.kind == OP and token.value == "*":
            self.advance()
            return WildcardStep(span=(token.offset, token.length))
        expr = self.parse_expr(_PATH_BP, depth + 1)
        return ExprStep(expr, span=(_start(expr), _end(expr) - _start(expr)))

    def _at_op(self, op: str) -> bool:
        return self.current.kind == OP and self.current.value == op


def _start(node) -> int:
    return node.span[0]


def _end(node) -> int:
    return node.span[0] + node.span[1]


def _span(start: Token, end: Token) -> tuple:
    return (start.offset, end.end - start.offset)


def parse_mapping(source: str) -> MappingAst:
    """Parse mapping-expression text into a spanned AST."""
    return _Parser(source).parse()
