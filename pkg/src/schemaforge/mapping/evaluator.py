"""Pure, deterministic evaluator for parsed mapping expressions.

Semantics follow docs/mapping-grammar.md: evaluation works on sequences,
singletons collapse, the empty sequence means "no value", and generated
expressions run under a recursion-depth limit and step budget because they
are untrusted input.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext

from ..document import DataNode, is_number, json_equal
from .errors import MappingEvalError, MappingRuntimeError, MappingTypeError
from .functions import BUILTINS
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
from .values import (
    EMPTY,
    Builtin,
    Closure,
    Frame,
    Sequence,
    effective_boolean,
    floor_index,
    is_callable_value,
    materialize,
    stringify,
)

_ARITHMETIC = {"+", "-", "*", "/", "%"}
_ORDERING = {"<", "<=", ">", ">="}


@dataclass(frozen=True)
class EvalLimits:
    max_depth: int = 256
    max_steps: int = 10_000_000


class Evaluator:
    def __init__(self, limits: EvalLimits, source: str | None = None):
        self.limits = limits
        self.source = source
        self.steps = 0

    # ------------------------------------------------------------- plumbing

    def _charge(self, amount: int, span: tuple) -> None:
        self.steps += amount
        if self.steps > self.limits.max_steps:
            raise MappingRuntimeError("evaluation step budget exceeded", span, self.source)

    def type_error(self, message: str, span: tuple) -> MappingTypeError:
        return MappingTypeError(message, span, self.source)

    def eval(self, node, ctx, env: Frame, depth: int):
        self._charge(1, node.span)
        if depth > self.limits.max_depth:
            raise MappingRuntimeError("recursion depth limit exceeded", node.span, self.source)

        if isinstance(node, Literal):
            return node.value
        if isinstance(node, ContextRef):
            return ctx
        if isinstance(node, VarRef):
            found, value = env.find(node.name)
            if found:
                return value
            builtin = BUILTINS.get(node.name)
            if builtin is None:
                raise MappingEvalError(f"unknown variable ${node.name}", node.span, self.source)
            return builtin
        if isinstance(node, Path):
            return self.eval_path(node, ctx, env, depth)
        if isinstance(node, Filter):
            base = self.eval(node.base, ctx, env, depth + 1)
            return self.apply_predicate(base, node.predicate, env, depth)
        if isinstance(node, ArrayCtor):
            out: list = []
            for item_node in node.items:
                value = self.eval(item_node, ctx, env, depth + 1)
                if value is EMPTY:
                    continue
                if isinstance(value, Sequence):
                    out.extend(value)
                else:
                    out.append(value)
            return out
        if isinstance(node, ObjectCtor):
            obj: dict = {}
            for key_node, value_node in node.entries:
                key = materialize(self.eval(key_node, ctx, env, depth + 1))
                if not isinstance(key, str):
                    raise self.type_error("object key must evaluate to a string", key_node.span)
                value = materialize(self.eval(value_node, ctx, env, depth + 1))
                if value is EMPTY:
                    continue
                if is_callable_value(value):
                    raise self.type_error("object value cannot be a function", value_node.span)
                if key in obj:
                    raise MappingEvalError(f"duplicate object key {key!r}", key_node.span, self.source)
                obj[key] = value
            return obj
        if isinstance(node, Binary):
            return self.eval_binary(node, ctx, env, depth)
        if isinstance(node, Unary):
            value = materialize(self.eval(node.operand, ctx, env, depth + 1))
            if value is EMPTY:
                return EMPTY
            if not is_number(value):
                raise self.type_error("unary '-' needs a number", node.span)
            return -value
        if isinstance(node, Conditional):
            test = effective_boolean(materialize(self.eval(node.condition, ctx, env, depth + 1)))
            if test:
                return self.eval(node.then, ctx, env, depth + 1)
            if node.orelse is None:
                return EMPTY
            return self.eval(node.orelse, ctx, env, depth + 1)
        if isinstance(node, Bind):
            value = materialize(self.eval(node.expr, ctx, env, depth + 1))
            env.vars[node.name] = value
            return value
        if isinstance(node, Block):
            frame = Frame({}, env)
            result = EMPTY
            for expr in node.exprs:
                result = self.eval(expr, ctx, frame, depth + 1)
            return result
        if isinstance(node, Lambda):
            return Closure(node.params, node.body, env)
        if isinstance(node, Call):
            target = self.eval(node.target, ctx, env, depth + 1)
            args = [materialize(self.eval(a, ctx, env, depth + 1)) for a in node.args]
            return self.call_function(target, args, node.span, depth, ctx)
        raise MappingEvalError(f"unsupported node {type(node).__name__}", node.span, self.source)

    # ----------------------------------------------------------------- paths

    def eval_path(self, node: Path, ctx, env: Frame, depth: int):
        if node.head is None:
            items = [ctx]
        else:
            head = self.eval(node.head, ctx, env, depth + 1)
            if head is EMPTY:
                items = []
            elif isinstance(head, (Sequence, list)):
                items = list(head)
            else:
                items = [head]
        for index, step in enumerate(node.steps):
            last = index == len(node.steps) - 1
            raw = []
            for item in items:
                value = self.eval_step_once(step, item, env, depth)
                if value is EMPTY:
                    continue
                raw.append(value)
            if last and len(raw) == 1 and isinstance(raw[0], list) and not isinstance(raw[0], Sequence):
                return raw[0]
            flat: list = []
            for value in raw:
                if isinstance(value, list):
                    flat.extend(value)
                else:
                    flat.append(value)
            items = flat
        return Sequence(items)

    def eval_step_once(self, step, item, env: Frame, depth: int):
        self._charge(1, step.span)
        if isinstance(step, NameStep):
            value = self._lookup_name(step.name, item)
        elif isinstance(step, WildcardStep):
            if isinstance(item, dict):
                value = Sequence(item.values())
            elif isinstance(item, list):
                value = Sequence(item)
            else:
                value = EMPTY
        else:
            assert isinstance(step, ExprStep)
            value = self.eval(step.expr, item, env, depth + 1)
        for predicate in step.predicates:
            value = self.apply_predicate(value, predicate, env, depth)
        return value

    def _lookup_name(self, name: str, item):
        if isinstance(item, dict):
            return item.get(name, EMPTY)
        if isinstance(item, list):
            out: list = []
            for element in item:
                value = self._lookup_name(name, element)
                if value is EMPTY:
                    continue
                if isinstance(value, list):
                    out.extend(value)
                else:
                    out.append(value)
            return Sequence(out)
        return EMPTY

    def apply_predicate(self, value, predicate, env: Frame, depth: int):
        if value is EMPTY:
            return EMPTY
        items = list(value) if isinstance(value, list) else [value]
        total = len(items)
        kept = []
        for index, item in enumerate(items):
            self._charge(1, predicate.span)
            result = materialize(self.eval(predicate, item, env, depth + 1))
            if result is EMPTY:
                continue
            numbers = None
            if is_number(result):
                numbers = [result]
            elif isinstance(result, list) and result and all(is_number(x) for x in result):
                numbers = result
            if numbers is not None:
                wanted = set()
                for number in numbers:
                    j = floor_index(number)
                    wanted.add(j + total if j < 0 else j)
                if index in wanted:
                    kept.append(item)
            elif effective_boolean(result):
                kept.append(item)
        return Sequence(kept)

    # ------------------------------------------------------------- operators

    def eval_binary(self, node: Binary, ctx, env: Frame, depth: int):
        op = node.op
        if op in ("and", "or"):
            left = effective_boolean(materialize(self.eval(node.lhs, ctx, env, depth + 1)))
            if op == "and" and not left:
                return False
            if op == "or" and left:
                return True
            return effective_boolean(materialize(self.eval(node.rhs, ctx, env, depth + 1)))

        left = materialize(self.eval(node.lhs, ctx, env, depth + 1))
        right = materialize(self.eval(node.rhs, ctx, env, depth + 1))

        if op in ("=", "!="):
            equal = self._equal(left, right)
            return equal if op == "=" else not equal
        if op == "in":
            if left is EMPTY or right is EMPTY:
                return False
            candidates = right if isinstance(right, list) else [right]
            return any(self._equal(left, c) for c in candidates)
        if op == "&":
            for side, side_node in ((left, node.lhs), (right, node.rhs)):
                if is_callable_value(side):
                    raise self.type_error("'&' cannot stringify a function", side_node.span)
            return stringify(left) + stringify(right)
        if left is EMPTY or right is EMPTY:
            return EMPTY
        if op in _ORDERING:
            if is_number(left) and is_number(right):
                pass
            elif isinstance(left, str) and isinstance(right, str):
                pass
            else:
                raise self.type_error(
                    f"'{op}' needs two numbers or two strings", node.span
                )
            if op == "<":
                return left < right
            if op == "<=":
                return left <= right
            if op == ">":
                return left > right
            return left >= right
        if op in _ARITHMETIC:
            if not (is_number(left) and is_number(right)):
                raise self.type_error(f"'{op}' needs numbers", node.span)
            return self._arithmetic(op, left, right, node.span)
        if op == "..":
            lo = self._range_bound(left, node.lhs.span)
            hi = self._range_bound(right, node.rhs.span)
            if hi < lo:
                return Sequence([])
            self._charge(hi - lo + 1, node.span)
            return Sequence(range(lo, hi + 1))
        raise MappingEvalError(f"unsupported operator '{op}'", node.span, self.source)

    def _equal(self, left, right) -> bool:
        if left is EMPTY or right is EMPTY:
            return False
        if is_callable_value(left) or is_callable_value(right):
            return False
        return json_equal(left, right)

    def _range_bound(self, value, span: tuple) -> int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, Decimal) and value == value.to_integral_value():
            return int(value)
        raise self.type_error("'..' needs integer bounds", span)

    def _arithmetic(self, op: str, left, right, span: tuple):
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0:
                raise MappingRuntimeError("division by zero", span, self.source)
            return Decimal(left) / Decimal(right)
        if right == 0:
            raise MappingRuntimeError("modulo by zero", span, self.source)
        if isinstance(left, int) and isinstance(right, int):
            quotient = abs(left) // abs(right)
            remainder = abs(left) - quotient * abs(right)
            return remainder if left >= 0 else -remainder
        return Decimal(left) % Decimal(right)

    # ------------------------------------------------------------- functions

    def call_function(self, target, args: list, span: tuple, depth: int, ctx=None):
        if isinstance(target, Builtin):
            if not (target.min_arity <= len(args) <= target.max_arity):
                expected = (
                    str(target.min_arity)
                    if target.min_arity == target.max_arity
                    else f"{target.min_arity} to {target.max_arity}"
                )
                raise MappingEvalError(
                    f"${target.name} takes {expected} argument(s), got {len(args)}",
                    span,
                    self.source,
                )
            return target.impl(self, args, span, depth)
        if isinstance(target, Closure):
            padded = list(args[: len(target.params)])
            padded += [EMPTY] * (len(target.params) - len(padded))
            frame = Frame(dict(zip(target.params, padded)), target.env)
            return self.eval(target.body, ctx if ctx is not None else EMPTY, frame, depth + 1)
        raise self.type_error("this value is not a function", span)


def evaluate_mapping(ast: MappingAst, doc: DataNode, limits: EvalLimits = EvalLimits()) -> DataNode:
    """Evaluate a parsed mapping against a document; pure in both arguments.

    An empty (no value) result materializes as null at the top level.
    """
    evaluator = Evaluator(limits, getattr(ast, "source", None))
    with localcontext() as decimal_ctx:
        decimal_ctx.prec = 28
        result = materialize(evaluator.eval(ast.root, doc, Frame({}, None), 0))
    if result is EMPTY:
        return None
    if is_callable_value(result):
        raise MappingTypeError("mapping evaluated to a function, not a value", ast.root.span, ast.source)
    return result
