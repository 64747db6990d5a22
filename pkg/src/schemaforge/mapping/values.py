"""Runtime value model: sequences, the empty ('no value') marker, closures."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_FLOOR
from typing import Any, Callable

from ..document import is_number, serialize_json


class _EmptyType:
    """Absence of a value; distinct from JSON null."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "<empty>"

    def __bool__(self):
        return False


EMPTY = _EmptyType()


class Sequence(list):
    """Ordered multi-value result; collapses at materialization boundaries."""

    __slots__ = ()


@dataclass(frozen=True)
class Closure:
    params: tuple
    body: Any
    env: Any


@dataclass(frozen=True)
class Builtin:
    name: str
    min_arity: int
    max_arity: int
    impl: Callable


class Frame:
    __slots__ = ("vars", "parent")

    def __init__(self, vars: dict, parent: "Frame | None"):
        self.vars = vars
        self.parent = parent

    def find(self, name: str) -> tuple:
        frame = self
        while frame is not None:
            if name in frame.vars:
                return True, frame.vars[name]
            frame = frame.parent
        return False, None


def materialize(value):
    """Collapse a sequence: empty -> EMPTY, singleton -> the item, else list."""
    if isinstance(value, Sequence):
        if not value:
            return EMPTY
        if len(value) == 1:
            return value[0]
        return list(value)
    return value


def items_of(value) -> list:
    """View a value as a list of items (EMPTY -> [], array -> elements)."""
    if value is EMPTY:
        return []
    if isinstance(value, list):
        return list(value)
    return [value]


def effective_boolean(value) -> bool:
    """JSONata-style boolean cast; EMPTY and functions are false."""
    if value is EMPTY or value is None or value is False:
        return False
    if value is True:
        return True
    if isinstance(value, str):
        return len(value) > 0
    if is_number(value):
        return value != 0
    if isinstance(value, list):
        return any(effective_boolean(item) for item in value)
    if isinstance(value, dict):
        return len(value) > 0
    return False


def is_callable_value(value) -> bool:
    return isinstance(value, (Closure, Builtin))


def stringify(value) -> str:
    """String cast used by '&' and $string; EMPTY becomes the empty string."""
    if value is EMPTY:
        return ""
    if isinstance(value, str):
        return value
    return serialize_json(value)


def floor_index(value) -> int:
    if isinstance(value, int):
        return value
    return int(value.to_integral_value(rounding=ROUND_FLOOR))
