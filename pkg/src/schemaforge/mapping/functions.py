"""Registered builtin functions ($sum, $map, ...)."""

from __future__ import annotations

import re
from decimal import Decimal

from ..document import is_number, json_equal
from .errors import MappingTypeError
from .values import (
    EMPTY,
    Builtin,
    Closure,
    Sequence,
    effective_boolean,
    floor_index,
    items_of,
    is_callable_value,
    materialize,
    stringify,
)

_JSON_NUMBER_RE = re.compile(r"^-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?$")

BUILTINS: dict = {}


def _register(name: str, min_arity: int, max_arity: int | None = None):
    def wrap(fn):
        BUILTINS[name] = Builtin(name, min_arity, max_arity or min_arity, fn)
        return fn

    return wrap


def registered_functions() -> list:
    """The v1 function table as (name, (min_arity, max_arity)) pairs."""
    return sorted((b.name, (b.min_arity, b.max_arity)) for b in BUILTINS.values())


def _numbers(ev, name: str, value, span) -> list:
    items = items_of(value)
    for item in items:
        if not is_number(item):
            raise MappingTypeError(f"${name} needs numbers", span, ev.source)
    return items


def _string_arg(ev, name: str, value, span) -> str:
    if not isinstance(value, str):
        raise MappingTypeError(f"${name} needs a string", span, ev.source)
    return value


def _int_arg(ev, name: str, value, span) -> int:
    if not is_number(value):
        raise MappingTypeError(f"${name} needs a number", span, ev.source)
    return floor_index(value)


def _callable_arg(ev, name: str, value, span):
    if not is_callable_value(value):
        raise MappingTypeError(f"${name} needs a function argument", span, ev.source)
    return value


def _invoke(ev, fn, args: list, span, depth, ctx):
    take = len(fn.params) if isinstance(fn, Closure) else fn.max_arity
    return materialize(ev.call_function(fn, args[:take], span, depth, ctx))


# ------------------------------------------------------------------ aggregation


@_register("sum", 1)
def _sum(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    total = 0
    for number in _numbers(ev, "sum", args[0], span):
        total += number
    return total


@_register("max", 1)
def _max(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    numbers = _numbers(ev, "max", args[0], span)
    return max(numbers) if numbers else EMPTY


@_register("min", 1)
def _min(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    numbers = _numbers(ev, "min", args[0], span)
    return min(numbers) if numbers else EMPTY


@_register("average", 1)
def _average(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    numbers = _numbers(ev, "average", args[0], span)
    if not numbers:
        return EMPTY
    total = 0
    for number in numbers:
        total += number
    return Decimal(total) / Decimal(len(numbers))


@_register("count", 1)
def _count(ev, args, span, depth):
    return len(items_of(args[0]))


# ------------------------------------------------------------------------ casts


@_register("string", 1)
def _string(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    if is_callable_value(args[0]):
        raise MappingTypeError("$string cannot stringify a function", span, ev.source)
    return stringify(args[0])


@_register("number", 1)
def _number(ev, args, span, depth):
    value = args[0]
    if value is EMPTY:
        return EMPTY
    if isinstance(value, bool):
        return 1 if value else 0
    if is_number(value):
        return value
    if isinstance(value, str) and _JSON_NUMBER_RE.match(value):
        if re.match(r"^-?(?:0|[1-9][0-9]*)$", value):
            return int(value)
        return Decimal(value)
    raise MappingTypeError("$number cannot convert this value", span, ev.source)


@_register("boolean", 1)
def _boolean(ev, args, span, depth):
    return effective_boolean(args[0])


@_register("not", 1)
def _not(ev, args, span, depth):
    return not effective_boolean(args[0])


@_register("exists", 1)
def _exists(ev, args, span, depth):
    return args[0] is not EMPTY


# ---------------------------------------------------------------------- strings


@_register("uppercase", 1)
def _uppercase(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    return _string_arg(ev, "uppercase", args[0], span).upper()


@_register("lowercase", 1)
def _lowercase(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    return _string_arg(ev, "lowercase", args[0], span).lower()


@_register("trim", 1)
def _trim(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    text = _string_arg(ev, "trim", args[0], span)
    return re.sub(r"[ \t\n\r]+", " ", text).strip()


@_register("substring", 2, 3)
def _substring(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    text = _string_arg(ev, "substring", args[0], span)
    start = _int_arg(ev, "substring", args[1], span)
    if start < 0:
        start = max(0, len(text) + start)
    if len(args) == 3:
        length = max(0, _int_arg(ev, "substring", args[2], span))
        return text[start : start + length]
    return text[start:]


@_register("split", 2, 3)
def _split(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    text = _string_arg(ev, "split", args[0], span)
    sep = _string_arg(ev, "split", args[1], span)
    if sep == "":
        raise MappingTypeError("$split separator must not be empty", span, ev.source)
    parts = text.split(sep)
    if len(args) == 3:
        parts = parts[: max(0, _int_arg(ev, "split", args[2], span))]
    return parts


@_register("join", 1, 2)
def _join(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    sep = _string_arg(ev, "join", args[1], span) if len(args) == 2 else ""
    parts = items_of(args[0])
    for part in parts:
        if not isinstance(part, str):
            raise MappingTypeError("$join needs an array of strings", span, ev.source)
    return sep.join(parts)


@_register("contains", 2)
def _contains(ev, args, span, depth):
    if args[0] is EMPTY:
        return False
    text = _string_arg(ev, "contains", args[0], span)
    return _string_arg(ev, "contains", args[1], span) in text


@_register("replace", 3, 4)
def _replace(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    text = _string_arg(ev, "replace", args[0], span)
    pattern = _string_arg(ev, "replace", args[1], span)
    if pattern == "":
        raise MappingTypeError("$replace pattern must not be empty", span, ev.source)
    replacement = _string_arg(ev, "replace", args[2], span)
    limit = _int_arg(ev, "replace", args[3], span) if len(args) == 4 else -1
    return text.replace(pattern, replacement, limit)


# ---------------------------------------------------------------------- objects


@_register("keys", 1)
def _keys(ev, args, span, depth):
    value = args[0]
    if isinstance(value, dict):
        keys = list(value.keys())
    elif isinstance(value, list):
        keys = []
        for element in value:
            if isinstance(element, dict):
                for key in element:
                    if key not in keys:
                        keys.append(key)
    else:
        return EMPTY
    return keys if keys else EMPTY


@_register("values", 1)
def _values(ev, args, span, depth):
    value = args[0]
    if isinstance(value, dict):
        out = list(value.values())
    elif isinstance(value, list):
        out = []
        for element in value:
            if not isinstance(element, dict):
                raise MappingTypeError("$values needs objects", span, ev.source)
            out.extend(element.values())
    elif value is EMPTY:
        return EMPTY
    else:
        raise MappingTypeError("$values needs an object", span, ev.source)
    return out if out else EMPTY


@_register("merge", 1)
def _merge(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    merged: dict = {}
    for element in items_of(args[0]):
        if not isinstance(element, dict):
            raise MappingTypeError("$merge needs an array of objects", span, ev.source)
        merged.update(element)
    return merged


# ----------------------------------------------------------------------- arrays


@_register("append", 2)
def _append(ev, args, span, depth):
    left, right = args
    if left is EMPTY:
        return right
    if right is EMPTY:
        return left
    return items_of(left) + items_of(right)


@_register("distinct", 1)
def _distinct(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    out: list = []
    for item in items_of(args[0]):
        if not any(json_equal(item, seen) for seen in out):
            out.append(item)
    return out


@_register("sort", 1, 2)
def _sort(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    items = items_of(args[0])
    if len(args) == 2:
        comparator = _callable_arg(ev, "sort", args[1], span)

        def should_swap(l, r):
            return effective_boolean(_invoke(ev, comparator, [l, r], span, depth, l))

        return _merge_sort(items, should_swap)
    if all(is_number(x) for x in items):
        return sorted(items)
    if all(isinstance(x, str) for x in items):
        return sorted(items)
    raise MappingTypeError(
        "$sort without a comparator needs all numbers or all strings", span, ev.source
    )


def _merge_sort(items: list, should_swap) -> list:
    if len(items) <= 1:
        return list(items)
    mid = len(items) // 2
    left = _merge_sort(items[:mid], should_swap)
    right = _merge_sort(items[mid:], should_swap)
    out: list = []
    i = j = 0
    while i < len(left) and j < len(right):
        if should_swap(left[i], right[j]):
            out.append(right[j])
            j += 1
        else:
            out.append(left[i])
            i += 1
    out.extend(left[i:])
    out.extend(right[j:])
    return out


# ------------------------------------------------------------------ higher-order


@_register("map", 2)
def _map(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    fn = _callable_arg(ev, "map", args[1], span)
    items = items_of(args[0])
    out = Sequence()
    for index, item in enumerate(items):
        result = _invoke(ev, fn, [item, index, items], span, depth, item)
        if result is not EMPTY:
            out.append(result)
    return out


@_register("filter", 2)
def _filter(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    fn = _callable_arg(ev, "filter", args[1], span)
    items = items_of(args[0])
    out = Sequence()
    for index, item in enumerate(items):
        if effective_boolean(_invoke(ev, fn, [item, index, items], span, depth, item)):
            out.append(item)
    return out


@_register("reduce", 2, 3)
def _reduce(ev, args, span, depth):
    if args[0] is EMPTY:
        return EMPTY
    fn = _callable_arg(ev, "reduce", args[1], span)
    items = items_of(args[0])
    if len(args) == 3:
        accumulator = args[2]
        start = 0
    else:
        if not items:
            return EMPTY
        accumulator = items[0]
        start = 1
    for index in range(start, len(items)):
        accumulator = _invoke(
            ev, fn, [accumulator, items[index], index, items], span, depth, items[index]
        )
    return accumulator


@_register("each", 2)
def _each(ev, args, span, depth):
    value = args[0]
    if value is EMPTY:
        return EMPTY
    if not isinstance(value, dict):
        raise MappingTypeError("$each needs an object", span, ev.source)
    fn = _callable_arg(ev, "each", args[1], span)
    out = Sequence()
    for key, item in value.items():
        result = _invoke(ev, fn, [item, key], span, depth, item)
        if result is not EMPTY:
            out.append(result)
    return out
