"""Schema inference from a single document instance.

Used for the mapping prompt's source schema and for CSV import.  The rules
are deliberately conservative: no format or enum detection, and `required`
uses the intersection of keys across sibling objects so sparse columns never
become required.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from functools import reduce

from .document import DataNode, json_equal
from .schema import SchemaNode


@dataclass(frozen=True)
class InferenceOptions:
    detect_integer: bool = True
    required_mode: str = "intersection"  # or "all-present"
    merge_array_items: bool = True


DEFAULTS = InferenceOptions()


def infer_schema(doc: DataNode, opts: InferenceOptions = DEFAULTS) -> SchemaNode:
    """Infer a schema the document is guaranteed to validate against."""
    if doc is None:
        return {"type": "null"}
    if isinstance(doc, bool):
        return {"type": "boolean"}
    if isinstance(doc, int):
        return {"type": "integer" if opts.detect_integer else "number"}
    if isinstance(doc, Decimal):
        return {"type": "number"}
    if isinstance(doc, str):
        return {"type": "string"}
    if isinstance(doc, list):
        if not doc or not opts.merge_array_items:
            return {"type": "array"}
        items = reduce(
            lambda a, b: merge_schemas(a, b, opts),
            (infer_schema(item, opts) for item in doc),
        )
        return {"type": "array", "items": items}
    if not doc:
        return {"type": "object"}
    props = {key: infer_schema(value, opts) for key, value in doc.items()}
    return {"type": "object", "properties": props, "required": list(doc.keys())}


def _single_type(schema: SchemaNode) -> str | None:
    if isinstance(schema, dict) and isinstance(schema.get("type"), str):
        return schema["type"]
    return None


def _branches(schema: SchemaNode) -> list:
    if isinstance(schema, dict) and set(schema) == {"anyOf"}:
        return list(schema["anyOf"])
    return [schema]


def merge_schemas(a: SchemaNode, b: SchemaNode, opts: InferenceOptions = DEFAULTS) -> SchemaNode:
    """Unify two inferred schemas into one accepting instances of either.

    Identical types merge structurally, integer and number unify to number,
    anything else becomes an anyOf with duplicate branches removed.
    """
    if json_equal(a, b):
        return a
    ta, tb = _single_type(a), _single_type(b)
    if ta and tb:
        if ta == tb:
            return _merge_same_type(a, b, ta, opts)
        if {ta, tb} == {"integer", "number"}:
            return {"type": "number"}
    branches: list = []
    for branch in _branches(a) + _branches(b):
        merged = False
        for i, existing in enumerate(branches):
            te, tn = _single_type(existing), _single_type(branch)
            if json_equal(existing, branch):
                merged = True
                break
            if te and tn and (te == tn or {te, tn} == {"integer", "number"}):
                branches[i] = merge_schemas(existing, branch, opts)
                merged = True
                break
        if not merged:
            branches.append(branch)
    if len(branches) == 1:
        return branches[0]
    return {"anyOf": branches}


def _merge_same_type(a: dict, b: dict, t: str, opts: InferenceOptions) -> SchemaNode:
    if t == "object":
        props_a = a.get("properties", {})
        props_b = b.get("properties", {})
        props = dict(props_a)
        for key, sub in props_b.items():
            props[key] = merge_schemas(props[key], sub, opts) if key in props else sub
        req_a = a.get("required", [])
        req_b = b.get("required", [])
        if opts.required_mode == "all-present":
            required = list(req_a) + [k for k in req_b if k not in req_a]
        else:
            required = [k for k in req_a if k in req_b]
        out: dict = {"type": "object"}
        if props:
            out["properties"] = props
        if required:
            out["required"] = required
        return out
    if t == "array":
        items_a = a.get("items")
        items_b = b.get("items")
        if items_a is None and items_b is None:
            return {"type": "array"}
        if items_a is None:
            items = items_b
        elif items_b is None:
            items = items_a
        else:
            items = merge_schemas(items_a, items_b, opts)
        return {"type": "array", "items": items}
    return {"type": t}
