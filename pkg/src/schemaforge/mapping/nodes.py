"""AST for the mapping-expression language.

Every node carries a source span (offset, length); spans are excluded from
equality so parse trees compare structurally.  ``to_source`` prints minimal
syntax: parentheses appear only where the tree holds a Block node, which is
exactly what makes pretty-print/reparse round-trips structural identities.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional, Tuple, Union

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_KEYWORDS = {"and", "or", "in", "function", "true", "false", "null"}


def _name_source(name: str) -> str:
    if _IDENT_RE.match(name) and name not in _KEYWORDS:
        return name
    return "`" + name + "`"


def _literal_source(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, (int, Decimal)):
        return str(value)
    return json.dumps(value, ensure_ascii=False)


@dataclass(frozen=True)
class Literal:
    value: Union[None, bool, int, Decimal, str]
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return _literal_source(self.value)


@dataclass(frozen=True)
class NameStep:
    name: str
    predicates: tuple = ()
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return _name_source(self.name) + _preds(self.predicates)


@dataclass(frozen=True)
class WildcardStep:
    predicates: tuple = ()
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return "*" + _preds(self.predicates)


@dataclass(frozen=True)
class ExprStep:
    expr: "Node"
    predicates: tuple = ()
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return self.expr.to_source() + _preds(self.predicates)


def _preds(predicates: tuple) -> str:
    return "".join("[" + p.to_source() + "]" for p in predicates)


@dataclass(frozen=True)
class Path:
    head: Optional["Node"]
    steps: Tuple[Union[NameStep, WildcardStep, ExprStep], ...]
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        parts = [] if self.head is None else [self.head.to_source()]
        parts.extend(step.to_source() for step in self.steps)
        return ".".join(parts)


@dataclass(frozen=True)
class Filter:
    base: "Node"
    predicate: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return self.base.to_source() + "[" + self.predicate.to_source() + "]"


@dataclass(frozen=True)
class ArrayCtor:
    items: tuple
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return "[" + ", ".join(item.to_source() for item in self.items) + "]"


@dataclass(frozen=True)
class ObjectCtor:
    entries: tuple  # of (key Node, value Node)
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        inner = ", ".join(f"{k.to_source()}: {v.to_source()}" for k, v in self.entries)
        return "{" + inner + "}"


@dataclass(frozen=True)
class Binary:
    op: str
    lhs: "Node"
    rhs: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return f"{self.lhs.to_source()} {self.op} {self.rhs.to_source()}"


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return self.op + self.operand.to_source()


@dataclass(frozen=True)
class Conditional:
    condition: "Node"
    then: "Node"
    orelse: Optional["Node"]
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        out = f"{self.condition.to_source()} ? {self.then.to_source()}"
        if self.orelse is not None:
            out += f" : {self.orelse.to_source()}"
        return out


@dataclass(frozen=True)
class Call:
    target: "Node"
    args: tuple
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return self.target.to_source() + "(" + ", ".join(a.to_source() for a in self.args) + ")"


@dataclass(frozen=True)
class VarRef:
    name: str
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return "$" + self.name


@dataclass(frozen=True)
class ContextRef:
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return "$"


@dataclass(frozen=True)
class Bind:
    name: str
    expr: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return f"${self.name} := {self.expr.to_source()}"


@dataclass(frozen=True)
class Block:
    exprs: tuple
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        return "(" + "; ".join(e.to_source() for e in self.exprs) + ")"


@dataclass(frozen=True)
class Lambda:
    params: tuple
    body: "Node"
    span: tuple = field(default=(0, 0), compare=False, repr=False, kw_only=True)

    def to_source(self) -> str:
        params = ", ".join("$" + p for p in self.params)
        return f"function({params}){{ {self.body.to_source()} }}"


Node = Union[
    Literal,
    Path,
    Filter,
    ArrayCtor,
    ObjectCtor,
    Binary,
    Unary,
    Conditional,
    Call,
    VarRef,
    ContextRef,
    Bind,
    Block,
    Lambda,
]

Step = Union[NameStep, WildcardStep, ExprStep]


@dataclass(frozen=True)
class MappingAst:
    """Parsed mapping expression plus the source it came from."""

    root: Node
    source: str

    def to_source(self) -> str:
        return self.root.to_source()
