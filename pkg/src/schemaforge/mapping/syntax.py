"""Syntactic validation: parse plus function-table checks, never evaluation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MappingSyntaxError, line_col
from .functions import BUILTINS
from .nodes import (
    ArrayCtor,
    Bind,
    Binary,
    Block,
    Call,
    Conditional,
    ExprStep,
    Filter,
    Lambda,
    ObjectCtor,
    Path,
    Unary,
    VarRef,
)
from .parser import parse_mapping


@dataclass(frozen=True)
class SyntaxReport:
    valid: bool
    diagnostics: tuple = ()  # of (span, message)

    def rendered(self, source: str) -> list:
        out = []
        for span, message in self.diagnostics:
            line, col = line_col(source, span[0])
            out.append(f"{line}:{col} {message}")
        return out

    def to_dict(self, source: str = "") -> dict:
        return {
            "valid": self.valid,
            "diagnostics": [
                {"offset": span[0], "length": span[1], "message": message}
                for span, message in self.diagnostics
            ],
            "rendered": self.rendered(source) if source else [],
        }


def validate_syntax(source: str) -> SyntaxReport:
    """Valid iff the text parses and all called functions are registered
    with a compatible arity (or are statically bound variables)."""
    try:
        ast = parse_mapping(source)
    except MappingSyntaxError as exc:
        return SyntaxReport(False, ((exc.span, exc.raw_message),))
    diagnostics: list = []
    _walk(ast.root, set(), diagnostics)
    return SyntaxReport(not diagnostics, tuple(diagnostics))


def _walk(node, bound: set, out: list) -> None:
    if isinstance(node, Call):
        if isinstance(node.target, VarRef):
            name = node.target.name
            if name in BUILTINS:
                builtin = BUILTINS[name]
                if not (builtin.min_arity <= len(node.args) <= builtin.max_arity):
                    expected = (
                        str(builtin.min_arity)
                        if builtin.min_arity == builtin.max_arity
                        else f"{builtin.min_arity} to {builtin.max_arity}"
                    )
                    out.append(
                        (node.span, f"${name} takes {expected} argument(s), got {len(node.args)}")
                    )
            elif name not in bound:
                out.append((node.target.span, f"unknown function ${name}"))
        else:
            _walk(node.target, bound, out)
        for arg in node.args:
            _walk(arg, bound, out)
        return
    if isinstance(node, Block):
        # bind names are visible to every expression in the block (closures
        # resolve their frame at call time, so recursion and mutual recursion
        # between bound lambdas are legal)
        scope = bound | {e.name for e in node.exprs if isinstance(e, Bind)}
        for expr in node.exprs:
            _walk(expr, scope, out)
        return
    if isinstance(node, Bind):
        _walk(node.expr, bound | {node.name}, out)
        return
    if isinstance(node, Lambda):
        _walk(node.body, bound | set(node.params), out)
        return
    if isinstance(node, Path):
        if node.head is not None:
            _walk(node.head, bound, out)
        for step in node.steps:
            if isinstance(step, ExprStep):
                _walk(step.expr, bound, out)
            for predicate in step.predicates:
                _walk(predicate, bound, out)
        return
    if isinstance(node, Filter):
        _walk(node.base, bound, out)
        _walk(node.predicate, bound, out)
        return
    if isinstance(node, ArrayCtor):
        for item in node.items:
            _walk(item, bound, out)
        return
    if isinstance(node, ObjectCtor):
        for key, value in node.entries:
            _walk(key, bound, out)
            _walk(value, bound, out)
        return
    if isinstance(node, Binary):
        _walk(node.lhs, bound, out)
        _walk(node.rhs, bound, out)
        return
    if isinstance(node, Unary):
        _walk(node.operand, bound, out)
        return
    if isinstance(node, Conditional):
        _walk(node.condition, bound, out)
        _walk(node.then, bound, out)
        if node.orelse is not None:
            _walk(node.orelse, bound, out)
        return
