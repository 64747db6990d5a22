"""Prompt construction for assistance tasks, and response post-processing.

Templates live under assets/prompts as text files with {{placeholder}}
markers; the mapping-language reference (assets/mapping_instructions.txt) is
injected verbatim into mapping prompts.  Optional inputs render as "(none)"
so prompt bytes are a total, reproducible function of the inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .document import DataNode, serialize_json
from .errors import SchemaForgeError
from .gateway import ChatMessage
from .infer import infer_schema
from .schema import SchemaNode, select_subschema
from .truncate import TruncationConfig, truncate_document

ROLE_SENTENCE = "You are a JSON Schema expert"


class PromptKind(str, Enum):
    schema_create = "schema_create"
    schema_modify = "schema_modify"
    schema_query = "schema_query"
    data_create = "data_create"
    data_modify = "data_modify"
    data_query = "data_query"
    mapping_generate = "mapping_generate"


SCHEMA_KINDS = (PromptKind.schema_create, PromptKind.schema_modify)
DATA_KINDS = (PromptKind.data_create, PromptKind.data_modify)
QUERY_KINDS = (PromptKind.schema_query, PromptKind.data_query)


class MissingInputError(SchemaForgeError):
    def __init__(self, kind: "PromptKind", name: str):
        self.field = name
        super().__init__(f"{kind.value} needs the {name!r} input")


@dataclass(frozen=True)
class PromptBundle:
    kind: PromptKind
    messages: tuple
    context_path: tuple | None = None
    # TruncationOutcome of the embedded document, for mapping_generate bundles
    truncation: object = field(default=None, compare=False)

    def user_content(self) -> str:
        return self.messages[-1].content


_PLACEHOLDER_RE = re.compile(r"\{\{(\w+)\}\}")


def _asset(name: str) -> str:
    return (resources.files("schemaforge") / "assets" / name).read_text(encoding="utf-8")


def render_template(template: str, values: dict) -> str:
    def substitute(match: re.Match) -> str:
        key = match.group(1)
        if key not in values:
            raise SchemaForgeError(f"template placeholder {{{{{key}}}}} has no value")
        return values[key]

    return _PLACEHOLDER_RE.sub(substitute, template)


def _render_kind(kind: PromptKind, values: dict) -> tuple:
    system = render_template(_asset(f"prompts/{kind.value}_system.txt"), values).strip()
    user = render_template(_asset(f"prompts/{kind.value}_user.txt"), values).strip()
    return system, user


def mapping_example() -> dict:
    """The bundled few-shot mapping example (input, target schema, mapping)."""
    return {
        "example_input": _asset("examples/mapping_example_input.json").strip(),
        "example_target_schema": _asset("examples/mapping_example_target_schema.json").strip(),
        "example_mapping": _asset("examples/mapping_example.jnt").strip(),
    }


def build_prompt(
    kind: PromptKind | str,
    description: str | None = None,
    schema: SchemaNode | None = None,
    context_path: tuple | None = None,
    document: DataNode | None = None,
    target_schema: SchemaNode | None = None,
    remarks: str | None = None,
    prior_proposal: str | None = None,
    truncation: TruncationConfig = TruncationConfig(),
) -> PromptBundle:
    """Assemble the role-tagged message list for one assistance task.

    schema_modify includes only the sub-schema selected by context_path;
    mapping_generate embeds the truncated document next to a schema inferred
    from the complete document.  A prior proposal, when given, is carried as
    one assistant message (not the full transcript).
    """
    kind = PromptKind(kind)
    values: dict = {}

    if kind in (PromptKind.schema_create, PromptKind.data_create, *QUERY_KINDS, PromptKind.schema_modify, PromptKind.data_modify):
        if description is None:
            raise MissingInputError(kind, "description")
        values["description"] = description

    if kind in (PromptKind.schema_modify, PromptKind.schema_query):
        if schema is None:
            raise MissingInputError(kind, "schema")
        selected = select_subschema(schema, context_path or ())
        values["sub_schema"] = serialize_json(selected, compact=False)

    if kind in (PromptKind.data_modify, PromptKind.data_query):
        if document is None:
            raise MissingInputError(kind, "document")
        from .document import resolve_path

        fragment = resolve_path(document, context_path or ())
        values["document"] = serialize_json(fragment, compact=False)

    if kind == PromptKind.data_create:
        values["target_schema"] = (
            serialize_json(target_schema, compact=False) if target_schema is not None else "(none)"
        )

    outcome = None
    if kind == PromptKind.mapping_generate:
        if document is None:
            raise MissingInputError(kind, "document")
        if target_schema is None:
            raise MissingInputError(kind, "target_schema")
        outcome = truncate_document(document, truncation)
        values.update(mapping_example())
        values["language_spec"] = _asset("mapping_instructions.txt").strip()
        values["truncated_document"] = serialize_json(outcome.doc)
        values["source_schema"] = serialize_json(infer_schema(document))
        values["target_schema"] = serialize_json(target_schema)
        values["remarks"] = remarks if remarks else "(none)"

    system, user = _render_kind(kind, values)
    messages = [ChatMessage("system", system)]
    if prior_proposal:
        messages.append(ChatMessage("assistant", prior_proposal))
    messages.append(ChatMessage("user", user))
    return PromptBundle(
        kind=kind,
        messages=tuple(messages),
        context_path=tuple(context_path) if context_path is not None else None,
        truncation=outcome,
    )


_FENCE_OPEN_RE = re.compile(r"^```[ \t]*([A-Za-z0-9_+-]*)[ \t]*\n")


def strip_artifacts(response: str) -> str:
    """Remove a surrounding code fence (with optional language hint).

    Unwraps repeatedly until a fixed point, so the operation is idempotent
    even on fence-wrapped fences; text without a surrounding fence is only
    trimmed.
    """
    text = response.strip()
    while True:
        match = _FENCE_OPEN_RE.match(text)
        if not match:
            return text
        rest = text[match.end():]
        if not rest.rstrip().endswith("```"):
            return text
        body = rest.rstrip()
        body = body[: -len("```")]
        if body.endswith("\n"):
            body = body[:-1]
        new_text = body.strip()
        if new_text == text:
            return text
        text = new_text
