"""Uniform in-memory document model with JSON I/O and YAML/XML/CSV import.

A document is a plain Python tree (the ``DataNode`` alias): ``None``, ``bool``,
``int``, ``decimal.Decimal``, ``str``, ``list`` and ``dict`` (string keys,
insertion order preserved).  Numbers are never binary floats: integers stay
``int`` and every other number is a ``Decimal`` built from its source text, so
serialization is byte-stable.
"""

from __future__ import annotations

import csv as _csv
import io
import json
import re
from decimal import Decimal
from typing import Any, Iterable, Union
from xml.etree import ElementTree

import yaml

from .errors import SchemaForgeError

DataNode = Union[None, bool, int, Decimal, str, list, dict]
PathSegment = Union[str, int]
DocPath = tuple


class DocumentError(SchemaForgeError):
    pass


class ParseError(DocumentError):
    """Syntax error in an input text, with a 1-based line/column position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column or 0}: {message}"
        super().__init__(message)


class UnsupportedConstructError(DocumentError):
    pass


class RaggedRowError(DocumentError):
    def __init__(self, row_index: int, expected: int, actual: int):
        self.row_index = row_index
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"row {row_index}: expected {expected} cells, found {actual}"
        )


class PathNotFoundError(DocumentError):
    def __init__(self, path: tuple, prefix: tuple, reason: str = ""):
        self.path = path
        self.prefix = prefix
        detail = f" ({reason})" if reason else ""
        super().__init__(
            f"path {list(path)!r} not found; deepest resolvable prefix {list(prefix)!r}{detail}"
        )


def is_number(value: Any) -> bool:
    """True for DataNode numbers (bool is not a number)."""
    return isinstance(value, (int, Decimal)) and not isinstance(value, bool)


# --------------------------------------------------------------------------- JSON


def _reject_constant(name: str) -> None:
    raise UnsupportedConstructError(f"non-finite number {name!r} is not representable")


def _checked_pairs(pairs: list) -> dict:
    obj: dict = {}
    for key, value in pairs:
        if key in obj:
            raise UnsupportedConstructError(f"duplicate object key {key!r}")
        obj[key] = value
    return obj


def parse_json(text: str) -> DataNode:
    """Parse JSON text; key order preserved, non-integers become Decimal."""
    try:
        return json.loads(
            text,
            parse_float=Decimal,
            parse_constant=_reject_constant,
            object_pairs_hook=_checked_pairs,
        )
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc


def _scan(value: Any, stack: set) -> bool:
    """Validate node kinds and report whether any Decimal occurs."""
    if value is None or isinstance(value, bool) or isinstance(value, str):
        return False
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise DocumentError(f"non-finite number {value} is not serializable")
        return True
    if isinstance(value, int):
        return False
    if isinstance(value, float):
        raise DocumentError("binary float in document tree; use int or Decimal")
    if isinstance(value, list):
        key = id(value)
        if key in stack:
            raise DocumentError("cyclic document structure")
        stack.add(key)
        found = False
        for item in value:
            found = _scan(item, stack) or found
        stack.discard(key)
        return found
    if isinstance(value, dict):
        key = id(value)
        if key in stack:
            raise DocumentError("cyclic document structure")
        stack.add(key)
        found = False
        for k, item in value.items():
            if not isinstance(k, str):
                raise DocumentError(f"object key {k!r} is not a string")
            found = _scan(item, stack) or found
        stack.discard(key)
        return found
    raise DocumentError(f"value {value!r} of type {type(value).__name__} is not a DataNode")


def _write(value: Any, parts: list, compact: bool, indent: int) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, Decimal):
        parts.append(str(value))
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, str):
        parts.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, list):
        if not value:
            parts.append("[]")
            return
        if compact:
            parts.append("[")
            for i, item in enumerate(value):
                if i:
                    parts.append(",")
                _write(item, parts, compact, indent)
            parts.append("]")
        else:
            pad = " " * (indent + 2)
            parts.append("[\n")
            for i, item in enumerate(value):
                if i:
                    parts.append(",\n")
                parts.append(pad)
                _write(item, parts, compact, indent + 2)
            parts.append("\n" + " " * indent + "]")
    else:
        if not value:
            parts.append("{}")
            return
        if compact:
            parts.append("{")
            for i, (k, item) in enumerate(value.items()):
                if i:
                    parts.append(",")
                parts.append(json.dumps(k, ensure_ascii=False))
                parts.append(":")
                _write(item, parts, compact, indent)
            parts.append("}")
        else:
            pad = " " * (indent + 2)
            parts.append("{\n")
            for i, (k, item) in enumerate(value.items()):
                if i:
                    parts.append(",\n")
                parts.append(pad)
                parts.append(json.dumps(k, ensure_ascii=False))
                parts.append(": ")
                _write(item, parts, compact, indent + 2)
            parts.append("\n" + " " * indent + "}")


def serialize_json(doc: DataNode, compact: bool = True) -> str:
    """Serialize a document; compact form has no insignificant whitespace."""
    has_decimal = _scan(doc, set())
    if not has_decimal:
        # Decimal-free trees go through the C encoder; output is byte-identical
        # to the hand-rolled writer below.
        if compact:
            return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)
        return json.dumps(doc, indent=2, ensure_ascii=False)
    parts: list = []
    _write(doc, parts, compact, 0)
    return "".join(parts)


def byte_size(doc: DataNode) -> int:
    """UTF-8 byte length of the compact serialization."""
    return len(serialize_json(doc).encode("utf-8"))


def structurally_equal(a: DataNode, b: DataNode) -> bool:
    """Byte-equality of compact serializations (key order significant)."""
    return serialize_json(a) == serialize_json(b)


def json_equal(a: DataNode, b: DataNode) -> bool:
    """JSON value equality: numbers compare numerically, object key order ignored."""
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if is_number(a) and is_number(b):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(json_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(json_equal(v, b[k]) for k, v in a.items())
    return False


# --------------------------------------------------------------------------- YAML

_YAML_FLOAT_RE = re.compile(
    r"^(?:[-+]?(?:\.[0-9]+|[0-9]+(?:\.[0-9]*)?)(?:[eE][-+]?[0-9]+)?"
    r"|[-+]?\.(?:inf|Inf|INF)|\.(?:nan|NaN|NAN))$"
)
_YAML_NONFINITE_RE = re.compile(r"^(?:[-+]?\.(?:inf|Inf|INF)|\.(?:nan|NaN|NAN))$")


class _Core12Loader(yaml.SafeLoader):
    """SafeLoader with YAML 1.2 core-schema implicit typing (yes/no are strings)."""

    def construct_mapping(self, node, deep=False):
        mapping: dict = {}
        for key_node, value_node in node.value:
            key = self.construct_object(key_node, deep=True)
            if isinstance(key, (list, dict)):
                raise UnsupportedConstructError("complex mapping keys are not supported")
            if not isinstance(key, str):
                key = _scalar_to_key(key)
            if key in mapping:
                raise UnsupportedConstructError(f"duplicate mapping key {key!r}")
            mapping[key] = self.construct_object(value_node, deep=True)
        return mapping

    def construct_yaml_map(self, node):
        yield self.construct_mapping(node, deep=True)


def _scalar_to_key(key: Any) -> str:
    if key is None:
        return "null"
    if key is True:
        return "true"
    if key is False:
        return "false"
    return str(key)


def _construct_int(loader, node) -> int:
    text = node.value
    if text.startswith(("0x", "0o")):
        return int(text, 0)
    return int(text)


def _construct_float(loader, node) -> Decimal:
    text = node.value
    if _YAML_NONFINITE_RE.match(text):
        raise UnsupportedConstructError(f"non-finite number {text!r} is not representable")
    return Decimal(text)


_Core12Loader.yaml_implicit_resolvers = {}
_Core12Loader.add_implicit_resolver(
    "tag:yaml.org,2002:bool",
    re.compile(r"^(?:true|True|TRUE|false|False|FALSE)$"),
    list("tTfF"),
)
_Core12Loader.add_implicit_resolver(
    "tag:yaml.org,2002:int",
    re.compile(r"^(?:[-+]?[0-9]+|0o[0-7]+|0x[0-9a-fA-F]+)$"),
    list("-+0123456789"),
)
_Core12Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float", _YAML_FLOAT_RE, list("-+0123456789.")
)
_Core12Loader.add_implicit_resolver(
    "tag:yaml.org,2002:null",
    re.compile(r"^(?:~|null|Null|NULL|)$"),
    ["~", "n", "N", ""],
)
_Core12Loader.add_constructor("tag:yaml.org,2002:int", _construct_int)
_Core12Loader.add_constructor("tag:yaml.org,2002:float", _construct_float)
_Core12Loader.add_constructor("tag:yaml.org,2002:map", _Core12Loader.construct_yaml_map)


def _expand(value: Any, stack: set) -> DataNode:
    """Deep-copy containers (expanding YAML aliases); reject cycles."""
    if isinstance(value, list):
        if id(value) in stack:
            raise UnsupportedConstructError("recursive alias cannot be expanded")
        stack.add(id(value))
        out = [_expand(item, stack) for item in value]
        stack.discard(id(value))
        return out
    if isinstance(value, dict):
        if id(value) in stack:
            raise UnsupportedConstructError("recursive alias cannot be expanded")
        stack.add(id(value))
        out = {k: _expand(v, stack) for k, v in value.items()}
        stack.discard(id(value))
        return out
    if isinstance(value, float):
        raise UnsupportedConstructError("unexpected binary float from YAML loader")
    if value is None or isinstance(value, (bool, int, Decimal, str)):
        return value
    raise UnsupportedConstructError(
        f"YAML construct of type {type(value).__name__} is not supported"
    )


def from_yaml(text: str) -> DataNode:
    """Convert a single YAML 1.2 document (core schema) to a DataNode."""
    try:
        loaded = yaml.load(text, Loader=_Core12Loader)
    except UnsupportedConstructError:
        raise
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ParseError(str(getattr(exc, "problem", exc)), mark.line + 1, mark.column + 1) from exc
        raise ParseError(str(exc)) from exc
    return _expand(loaded, set())


# ---------------------------------------------------------------------------- XML


def _element_to_value(elem: ElementTree.Element) -> DataNode:
    obj: dict = {}
    for name, value in elem.attrib.items():
        obj["@" + name] = value
    texts = [elem.text or ""]
    for child in elem:
        texts.append(child.tail or "")
        value = _element_to_value(child)
        if child.tag in obj:
            existing = obj[child.tag]
            if isinstance(existing, list):
                existing.append(value)
            else:
                obj[child.tag] = [existing, value]
        else:
            obj[child.tag] = value
    text = "".join(texts).strip()
    if not obj:
        return text if text else None
    if text:
        obj["#text"] = text
    return obj


def from_xml(text: str) -> DataNode:
    """Convert well-formed XML to a DataNode.

    Convention: attributes under "@"-prefixed keys, text content under
    "#text", repeated sibling elements collapse into an array; leaf text
    stays string.
    """
    try:
        root = ElementTree.fromstring(text)
    except ElementTree.ParseError as exc:
        line, column = exc.position
        raise ParseError(exc.msg.split(":")[0], line, column) from exc
    return {root.tag: _element_to_value(root)}


# ---------------------------------------------------------------------------- CSV

_INT_CELL_RE = re.compile(r"^[+-]?[0-9]+$")
_NUM_CELL_RE = re.compile(r"^[+-]?(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)(?:[eE][+-]?[0-9]+)?$")


def _sniff_cell(cell: str) -> DataNode:
    if _INT_CELL_RE.match(cell):
        return int(cell)
    if _NUM_CELL_RE.match(cell):
        return Decimal(cell)
    if cell == "true":
        return True
    if cell == "false":
        return False
    return cell


def from_csv(text: str, delimiter: str = ",", header: bool = True) -> DataNode:
    """Convert RFC 4180 CSV text to an array of row objects.

    With header=true the first row gives the keys; otherwise keys are
    generated as column1..columnN.  Cells become integer, number, or boolean
    (exact lowercase true/false only) by sniffing; everything else — including
    yes/no — stays string.
    """
    rows = list(_csv.reader(io.StringIO(text), delimiter=delimiter))
    if not rows:
        if header:
            raise ParseError("missing header row", 1, 1)
        return []
    if header:
        keys = rows[0]
        data = rows[1:]
        first_data_index = 1
    else:
        keys = [f"column{i + 1}" for i in range(len(rows[0]))]
        data = rows
        first_data_index = 0
    out = []
    for offset, row in enumerate(data):
        if len(row) != len(keys):
            raise RaggedRowError(first_data_index + offset, len(keys), len(row))
        out.append({key: _sniff_cell(cell) for key, cell in zip(keys, row)})
    return out


# --------------------------------------------------------------------------- YAML out


class _YamlDumper(yaml.SafeDumper):
    pass


def _represent_decimal(dumper, value: Decimal):
    return dumper.represent_scalar("tag:yaml.org,2002:float", str(value))


def _represent_str(dumper, value: str):
    # Quote strings the 1.2 core schema would re-type (true, 08, 1e3, empty, ~).
    plain_retyped = (
        value == ""
        or _Core12Loader.yaml_implicit_resolvers
        and any(
            regexp.match(value)
            for key in (value[0] if value else "", None)
            for _tag, regexp in _Core12Loader.yaml_implicit_resolvers.get(key, [])
        )
    )
    style = "'" if plain_retyped else None
    return dumper.represent_scalar("tag:yaml.org,2002:str", value, style=style)


_YamlDumper.add_representer(Decimal, _represent_decimal)
_YamlDumper.add_representer(str, _represent_str)


def to_yaml(doc: DataNode) -> str:
    """Render a document as YAML that re-reads to the same DataNode."""
    return yaml.dump(
        doc,
        Dumper=_YamlDumper,
        sort_keys=False,
        allow_unicode=True,
        default_flow_style=False,
    )


# --------------------------------------------------------------------------- paths


def resolve_path(doc: DataNode, path: Iterable[PathSegment]) -> DataNode:
    """Resolve a path of object keys / array indexes; empty path is the root."""
    path = tuple(path)
    current = doc
    for i, segment in enumerate(path):
        if isinstance(segment, str) and isinstance(current, dict):
            if segment not in current:
                raise PathNotFoundError(path, path[:i], f"no key {segment!r}")
            current = current[segment]
        elif isinstance(segment, int) and not isinstance(segment, bool) and isinstance(current, list):
            if segment < 0 or segment >= len(current):
                raise PathNotFoundError(path, path[:i], f"index {segment} out of range")
            current = current[segment]
        else:
            raise PathNotFoundError(
                path, path[:i], f"segment {segment!r} does not match a {type(current).__name__}"
            )
    return current


def with_value_at(doc: DataNode, path: Iterable[PathSegment], value: DataNode) -> DataNode:
    """Copy of doc with the node at path replaced (path must resolve)."""
    path = tuple(path)
    if not path:
        return value
    resolve_path(doc, path)  # raises PathNotFoundError with prefix detail
    def rebuild(node: DataNode, remaining: tuple) -> DataNode:
        if not remaining:
            return value
        head = remaining[0]
        if isinstance(node, dict):
            return {k: (rebuild(v, remaining[1:]) if k == head else v) for k, v in node.items()}
        assert isinstance(node, list)
        return [rebuild(v, remaining[1:]) if i == head else v for i, v in enumerate(node)]
    return rebuild(doc, path)


def pointer_to_path(pointer: str) -> tuple:
    """JSON Pointer (RFC 6901) text to a path tuple; '' or '/' forms accepted."""
    if pointer in ("", "/"):
        return ()
    if not pointer.startswith("/"):
        raise DocumentError(f"invalid JSON pointer {pointer!r}")
    segments = []
    for raw in pointer[1:].split("/"):
        token = raw.replace("~1", "/").replace("~0", "~")
        segments.append(int(token) if re.match(r"^(?:0|[1-9][0-9]*)$", token) else token)
    return tuple(segments)


def path_to_pointer(path: Iterable[PathSegment]) -> str:
    out = []
    for segment in path:
        if isinstance(segment, int) and not isinstance(segment, bool):
            out.append(str(segment))
        else:
            out.append(str(segment).replace("~", "~0").replace("/", "~1"))
    return "".join("/" + s for s in out)
