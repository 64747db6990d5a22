"""JSON Schema (Draft 2020-12 subset) validation and sub-schema surgery.

Schemas are plain DataNode trees (dicts, or booleans for the trivial
schemas).  Supported keywords: type, properties, required, items, enum,
const, anyOf, oneOf, allOf, $ref (internal "#/..." only), $defs,
additionalProperties, patternProperties, title, description, format
(annotations), minimum, maximum, minLength, maxLength, pattern.  Unknown
keywords are preserved verbatim and ignored by validation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable

from .document import (
    DataNode,
    PathNotFoundError,
    is_number,
    json_equal,
    resolve_path,
    structurally_equal,
    with_value_at,
)
from .errors import SchemaForgeError

DIALECT_URI = "https://json-schema.org/draft/2020-12/schema"

TYPE_NAMES = ("null", "boolean", "integer", "number", "string", "array", "object")

SchemaNode = DataNode


class SchemaError(SchemaForgeError):
    pass


class RefResolutionError(SchemaError):
    """An internal $ref could not be resolved (distinct from an invalid instance)."""


class ClosureError(SchemaError):
    """A sub-schema's $defs closure cannot be repackaged standalone."""


class MergeRejectedError(SchemaError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        first = report.violations[0].message if report.violations else ""
        super().__init__(f"merged schema is not a valid schema: {first}")


@dataclass(frozen=True)
class Violation:
    instance_path: tuple
    schema_path: tuple
    keyword: str
    message: str

    def to_dict(self) -> dict:
        return {
            "instance_path": list(self.instance_path),
            "schema_path": list(self.schema_path),
            "keyword": self.keyword,
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple = ()

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


def _report(violations: list) -> ValidationReport:
    return ValidationReport(valid=not violations, violations=tuple(violations))


def _type_of(value: DataNode) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, Decimal):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    return "object"


def _matches_type(value: DataNode, name: str) -> bool:
    actual = _type_of(value)
    if name == actual:
        return True
    if name == "number" and actual == "integer":
        return True
    if name == "integer" and actual == "number":
        return value == value.to_integral_value()
    return False


def _resolve_ref(root: SchemaNode, ref: str, schema_path: tuple) -> tuple:
    """Return (subschema, path-of-target) for an internal '#/...' reference."""
    if not isinstance(ref, str) or not ref.startswith("#"):
        raise RefResolutionError(f"non-internal $ref {ref!r} at {list(schema_path)}")
    from .document import pointer_to_path

    target_path = pointer_to_path(ref[1:])
    try:
        target = resolve_path(root, target_path)
    except PathNotFoundError as exc:
        raise RefResolutionError(f"unresolvable $ref {ref!r}: {exc}") from exc
    return target, target_path


def validate_instance(doc: DataNode, schema: SchemaNode) -> ValidationReport:
    """Validate an instance against a schema; annotations never violate.

    Raises RefResolutionError for dangling or non-internal $refs, which is an
    error in the schema rather than a property of the instance.
    """
    violations: list = []
    _validate_value(doc, schema, schema, (), (), violations)
    return _report(violations)


def _validate_value(
    value: DataNode,
    schema: SchemaNode,
    root: SchemaNode,
    ipath: tuple,
    spath: tuple,
    out: list,
) -> None:
    if schema is True or (isinstance(schema, dict) and not schema):
        return
    if schema is False:
        out.append(Violation(ipath, spath, "schema", "schema false permits nothing"))
        return
    if not isinstance(schema, dict):
        out.append(Violation(ipath, spath, "schema", f"schema is {_type_of(schema)}, not object"))
        return

    if "$ref" in schema:
        target, tpath = _resolve_ref(root, schema["$ref"], spath + ("$ref",))
        _validate_value(value, target, root, ipath, tpath, out)
        if len(schema) == 1:
            return

    t = schema.get("type")
    if t is not None:
        names = t if isinstance(t, list) else [t]
        if not any(_matches_type(value, n) for n in names if isinstance(n, str)):
            expected = " or ".join(str(n) for n in names)
            out.append(
                Violation(ipath, spath + ("type",), "type", f"expected {expected}, got {_type_of(value)}")
            )

    if "enum" in schema and isinstance(schema["enum"], list):
        if not any(json_equal(value, option) for option in schema["enum"]):
            out.append(Violation(ipath, spath + ("enum",), "enum", "value not in enum"))

    if "const" in schema:
        if not json_equal(value, schema["const"]):
            out.append(Violation(ipath, spath + ("const",), "const", "value differs from const"))

    for combinator in ("allOf", "anyOf", "oneOf"):
        if combinator in schema and isinstance(schema[combinator], list):
            branches = schema[combinator]
            results = []
            for i, branch in enumerate(branches):
                sub: list = []
                _validate_value(value, branch, root, ipath, spath + (combinator, i), sub)
                results.append(not sub)
            if combinator == "allOf" and not all(results):
                failed = [str(i) for i, ok in enumerate(results) if not ok]
                out.append(
                    Violation(ipath, spath + (combinator,), combinator, f"branches {', '.join(failed)} failed")
                )
            elif combinator == "anyOf" and not any(results):
                out.append(Violation(ipath, spath + (combinator,), combinator, "no branch matched"))
            elif combinator == "oneOf" and sum(results) != 1:
                out.append(
                    Violation(ipath, spath + (combinator,), combinator, f"{sum(results)} branches matched, expected 1")
                )

    if is_number(value):
        if "minimum" in schema and is_number(schema["minimum"]) and value < schema["minimum"]:
            out.append(Violation(ipath, spath + ("minimum",), "minimum", f"{value} < {schema['minimum']}"))
        if "maximum" in schema and is_number(schema["maximum"]) and value > schema["maximum"]:
            out.append(Violation(ipath, spath + ("maximum",), "maximum", f"{value} > {schema['maximum']}"))

    if isinstance(value, str):
        if "minLength" in schema and isinstance(schema["minLength"], int) and len(value) < schema["minLength"]:
            out.append(Violation(ipath, spath + ("minLength",), "minLength", f"length {len(value)} < {schema['minLength']}"))
        if "maxLength" in schema and isinstance(schema["maxLength"], int) and len(value) > schema["maxLength"]:
            out.append(Violation(ipath, spath + ("maxLength",), "maxLength", f"length {len(value)} > {schema['maxLength']}"))
        if "pattern" in schema and isinstance(schema["pattern"], str):
            if not re.search(schema["pattern"], value):
                out.append(Violation(ipath, spath + ("pattern",), "pattern", f"does not match {schema['pattern']!r}"))

    if isinstance(value, list):
        if "items" in schema:
            for i, item in enumerate(value):
                _validate_value(item, schema["items"], root, ipath + (i,), spath + ("items",), out)

    if isinstance(value, dict):
        required = schema.get("required")
        if isinstance(required, list):
            for key in required:
                if isinstance(key, str) and key not in value:
                    out.append(
                        Violation(ipath, spath + ("required",), "required", f"missing required property {key!r}")
                    )
        props = schema.get("properties") if isinstance(schema.get("properties"), dict) else {}
        patterns = (
            schema.get("patternProperties")
            if isinstance(schema.get("patternProperties"), dict)
            else {}
        )
        for key, item in value.items():
            matched = False
            if key in props:
                matched = True
                _validate_value(item, props[key], root, ipath + (key,), spath + ("properties", key), out)
            for pattern, sub in patterns.items():
                if re.search(pattern, key):
                    matched = True
                    _validate_value(item, sub, root, ipath + (key,), spath + ("patternProperties", pattern), out)
            if not matched and "additionalProperties" in schema:
                extra = schema["additionalProperties"]
                if extra is False:
                    out.append(
                        Violation(
                            ipath + (key,),
                            spath + ("additionalProperties",),
                            "additionalProperties",
                            f"property {key!r} is not allowed",
                        )
                    )
                elif extra is not True:
                    _validate_value(item, extra, root, ipath + (key,), spath + ("additionalProperties",), out)


# ------------------------------------------------------------------ schema checks

_SUBSCHEMA_MAPS = ("properties", "patternProperties", "$defs")
_SUBSCHEMA_LISTS = ("allOf", "anyOf", "oneOf")


def validate_schema(candidate: DataNode) -> ValidationReport:
    """Structurally check a candidate schema; all problems go into the report."""
    violations: list = []
    _check_schema(candidate, candidate, (), violations)
    return _report(violations)


def _check_schema(schema: DataNode, root: DataNode, spath: tuple, out: list) -> None:
    if isinstance(schema, bool):
        return
    if not isinstance(schema, dict):
        out.append(Violation((), spath, "schema", f"schema must be an object or boolean, got {_type_of(schema)}"))
        return

    t = schema.get("type")
    if t is not None:
        names = t if isinstance(t, list) else [t]
        if not isinstance(t, (str, list)):
            out.append(Violation((), spath + ("type",), "type", "type must be a string or list of strings"))
        for name in names:
            if not isinstance(name, str) or name not in TYPE_NAMES:
                out.append(Violation((), spath + ("type",), "type", f"unknown type name {name!r}"))

    required = schema.get("required")
    if required is not None:
        if not isinstance(required, list) or not all(isinstance(k, str) for k in required):
            out.append(Violation((), spath + ("required",), "required", "required must be a list of strings"))
        elif len(set(required)) != len(required):
            out.append(Violation((), spath + ("required",), "required", "required entries must be unique"))

    if "enum" in schema and not isinstance(schema["enum"], list):
        out.append(Violation((), spath + ("enum",), "enum", "enum must be a list"))

    for kw in ("minimum", "maximum"):
        if kw in schema and not is_number(schema[kw]):
            out.append(Violation((), spath + (kw,), kw, f"{kw} must be a number"))
    for kw in ("minLength", "maxLength"):
        if kw in schema and (not isinstance(schema[kw], int) or isinstance(schema[kw], bool) or schema[kw] < 0):
            out.append(Violation((), spath + (kw,), kw, f"{kw} must be a non-negative integer"))

    if "pattern" in schema:
        if not isinstance(schema["pattern"], str):
            out.append(Violation((), spath + ("pattern",), "pattern", "pattern must be a string"))
        else:
            try:
                re.compile(schema["pattern"])
            except re.error as exc:
                out.append(Violation((), spath + ("pattern",), "pattern", f"invalid pattern: {exc}"))

    ref = schema.get("$ref")
    if ref is not None:
        if not isinstance(ref, str) or not ref.startswith("#"):
            out.append(Violation((), spath + ("$ref",), "$ref", f"only internal '#/...' references are supported, got {ref!r}"))
        else:
            try:
                _resolve_ref(root, ref, spath + ("$ref",))
            except RefResolutionError as exc:
                out.append(Violation((), spath + ("$ref",), "$ref", str(exc)))

    for kw in _SUBSCHEMA_MAPS:
        if kw in schema:
            if not isinstance(schema[kw], dict):
                out.append(Violation((), spath + (kw,), kw, f"{kw} must be an object"))
                continue
            for key, sub in schema[kw].items():
                if kw == "patternProperties":
                    try:
                        re.compile(key)
                    except re.error as exc:
                        out.append(Violation((), spath + (kw, key), kw, f"invalid pattern {key!r}: {exc}"))
                _check_schema(sub, root, spath + (kw, key), out)

    for kw in _SUBSCHEMA_LISTS:
        if kw in schema:
            if not isinstance(schema[kw], list) or not schema[kw]:
                out.append(Violation((), spath + (kw,), kw, f"{kw} must be a non-empty list"))
                continue
            for i, sub in enumerate(schema[kw]):
                _check_schema(sub, root, spath + (kw, i), out)

    if "items" in schema:
        _check_schema(schema["items"], root, spath + ("items",), out)
    if "additionalProperties" in schema:
        _check_schema(schema["additionalProperties"], root, spath + ("additionalProperties",), out)


# ------------------------------------------------------------- sub-schema surgery


def _collect_refs(schema: DataNode, found: list) -> None:
    if isinstance(schema, dict):
        for key, value in schema.items():
            if key == "$ref" and isinstance(value, str):
                found.append(value)
            else:
                _collect_refs(value, found)
    elif isinstance(schema, list):
        for item in schema:
            _collect_refs(item, found)


def _def_name(ref: str) -> str:
    """Top-level $defs name targeted by an internal reference."""
    if not ref.startswith("#/$defs/"):
        raise ClosureError(
            f"cannot repackage sub-schema: $ref {ref!r} does not point under #/$defs"
        )
    rest = ref[len("#/$defs/"):]
    return rest.split("/", 1)[0].replace("~1", "/").replace("~0", "~")


def select_subschema(schema: SchemaNode, path: Iterable) -> SchemaNode:
    """Extract the sub-schema at path plus the $defs closure it references."""
    path = tuple(path)
    node = resolve_path(schema, path)
    if not path:
        return node
    root_defs = schema.get("$defs", {}) if isinstance(schema, dict) else {}
    needed: dict = {}
    pending: list = []
    _collect_refs(node, pending)
    while pending:
        name = _def_name(pending.pop())
        if name in needed:
            continue
        if name not in root_defs:
            raise ClosureError(f"cannot repackage sub-schema: missing $defs entry {name!r}")
        needed[name] = root_defs[name]
        _collect_refs(root_defs[name], pending)
    if not needed:
        return node
    if not isinstance(node, dict):
        raise ClosureError("cannot attach $defs to a non-object sub-schema")
    out = dict(node)
    local = out.get("$defs", {})
    merged = dict(local)
    for name in sorted(needed):
        if name in merged and not structurally_equal(merged[name], needed[name]):
            raise ClosureError(
                f"cannot repackage sub-schema: local $defs entry {name!r} conflicts with root"
            )
        merged.setdefault(name, needed[name])
    out["$defs"] = merged
    return out


def _rewrite_refs(schema: DataNode, renames: dict) -> DataNode:
    if isinstance(schema, dict):
        out = {}
        for key, value in schema.items():
            if key == "$ref" and isinstance(value, str) and value.startswith("#/$defs/"):
                name = _def_name(value)
                if name in renames:
                    value = "#/$defs/" + renames[name] + value[len("#/$defs/" + name):]
            out[key] = _rewrite_refs(value, renames) if key != "$ref" else value
        return out
    if isinstance(schema, list):
        return [_rewrite_refs(item, renames) for item in schema]
    return schema


def merge_subschema(schema: SchemaNode, path: Iterable, replacement: SchemaNode) -> SchemaNode:
    """Replace the sub-schema at path; merge replacement $defs into the root.

    Colliding $defs names with different content are renamed with a numeric
    suffix and the replacement's internal references are rewritten to match.
    The merged result must pass validate_schema or MergeRejectedError is raised.
    """
    path = tuple(path)
    if not path:
        merged = replacement
    else:
        resolve_path(schema, path)
        incoming = replacement
        root_defs = dict(schema.get("$defs", {})) if isinstance(schema, dict) else {}
        renames: dict = {}
        if isinstance(incoming, dict) and isinstance(incoming.get("$defs"), dict):
            body = {k: v for k, v in incoming.items() if k != "$defs"}
            for name, definition in incoming["$defs"].items():
                if name in root_defs and not structurally_equal(root_defs[name], definition):
                    suffix = 2
                    while f"{name}{suffix}" in root_defs:
                        suffix += 1
                    renames[name] = f"{name}{suffix}"
                    root_defs[renames[name]] = definition
                else:
                    root_defs[name] = definition
            incoming = _rewrite_refs(body, renames)
            for name, new_name in renames.items():
                root_defs[new_name] = _rewrite_refs(root_defs[new_name], renames)
        merged = with_value_at(schema, path, incoming)
        if root_defs and isinstance(merged, dict):
            merged = dict(merged)
            merged["$defs"] = root_defs
    report = validate_schema(merged)
    if not report.valid:
        raise MergeRejectedError(report)
    return merged


def serialize_schema(schema: SchemaNode) -> str:
    """Written form of a schema, with the 2020-12 dialect URI first."""
    from .document import serialize_json

    if isinstance(schema, dict) and "$schema" not in schema:
        schema = {"$schema": DIALECT_URI, **schema}
    return serialize_json(schema, compact=False) + "\n"
