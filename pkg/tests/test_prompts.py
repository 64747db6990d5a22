import pytest

from schemaforge.document import byte_size, parse_json, serialize_json
from schemaforge.prompts import (
    MissingInputError,
    PromptKind,
    ROLE_SENTENCE,
    build_prompt,
    mapping_example,
    strip_artifacts,
)
from schemaforge.truncate import TruncationConfig

FIG1_PROMPT = (
    "Create a schema about MOF synthesis in chemistry. We have a list of synthesis "
    "experiments. Each experiment has a metal salt and a ligand and also creator, date, "
    "temperature, duration, product_purity (boolean). Ligand and metal salt should be "
    "objects which each have name, mass, inchi as properties."
)


def test_schema_create_contains_role_sentence_and_description():
    bundle = build_prompt(PromptKind.schema_create, description=FIG1_PROMPT)
    assert bundle.messages[0].role == "system"
    assert ROLE_SENTENCE in bundle.messages[0].content
    assert "Create a schema about MOF synthesis" in bundle.user_content()


def test_schema_modify_includes_only_selected_subschema():
    schema = {
        "type": "object",
        "properties": {
            "keep_out": {"type": "string", "title": "UNRELATED-MARKER"},
            "target": {"type": "object", "properties": {"x": {"type": "integer"}}},
        },
    }
    bundle = build_prompt(
        PromptKind.schema_modify,
        description="rename x",
        schema=schema,
        context_path=("properties", "target"),
    )
    assert ROLE_SENTENCE in bundle.messages[0].content
    assert "UNRELATED-MARKER" not in bundle.user_content()
    assert '"x"' in bundle.user_content()
    assert bundle.context_path == ("properties", "target")


def test_schema_modify_root_selection_is_whole_schema():
    schema = {"type": "object", "properties": {"a": {"type": "string"}}}
    bundle = build_prompt(
        PromptKind.schema_modify, description="change", schema=schema, context_path=()
    )
    assert '"properties"' in bundle.user_content()


def test_modify_subschema_carries_referenced_defs():
    schema = {
        "type": "object",
        "properties": {"c": {"$ref": "#/$defs/compound"}},
        "$defs": {"compound": {"type": "object", "title": "COMPOUND-DEF"}},
    }
    bundle = build_prompt(
        PromptKind.schema_modify,
        description="edit",
        schema=schema,
        context_path=("properties", "c"),
    )
    assert "COMPOUND-DEF" in bundle.user_content()


def test_missing_inputs_are_named():
    with pytest.raises(MissingInputError) as err:
        build_prompt(PromptKind.schema_modify, description="x")
    assert err.value.field == "schema"
    with pytest.raises(MissingInputError) as err:
        build_prompt(PromptKind.mapping_generate, document={})
    assert err.value.field == "target_schema"
    with pytest.raises(MissingInputError) as err:
        build_prompt(PromptKind.schema_create)
    assert err.value.field == "description"


def test_prior_proposal_is_an_assistant_message():
    bundle = build_prompt(
        PromptKind.schema_create, description="again", prior_proposal='{"type":"object"}'
    )
    roles = [m.role for m in bundle.messages]
    assert roles == ["system", "assistant", "user"]
    assert bundle.messages[1].content == '{"type":"object"}'


def test_mapping_bundle_section_order():
    doc = parse_json('{"rows":[{"a":1}]}')
    target = {"type": "object"}
    bundle = build_prompt(
        PromptKind.mapping_generate, document=doc, target_schema=target, remarks="be careful"
    )
    system = bundle.messages[0].content
    user = bundle.user_content()
    example = mapping_example()
    positions = [
        user.find(example["example_input"]),
        user.find(example["example_mapping"]),
        user.find(serialize_json(doc)),
        user.find('"rows"', user.find("Source schema")),
        user.find(serialize_json(target)),
        user.find("be careful"),
    ]
    assert all(p >= 0 for p in positions)
    assert positions == sorted(positions)
    # instructions (the language reference) live in the system message
    assert "Mapping language reference" in system


def test_mapping_bundle_truncates_document_but_infers_from_full():
    rows = [{"filler": "x" * 96, "row": i} for i in range(12000)]
    rows.append({"filler": "y", "row": 12000, "only_in_tail": True})
    doc = {"rows": rows}
    assert byte_size(doc) > 1_000_000
    bundle = build_prompt(
        PromptKind.mapping_generate, document=doc, target_schema={"type": "object"}
    )
    user = bundle.user_content()
    start = user.find("Input document (may be truncated):\n") + len(
        "Input document (may be truncated):\n"
    )
    end = user.find("\n\nSource schema")
    embedded = user[start:end]
    assert len(embedded.encode("utf-8")) <= 65536
    assert "only_in_tail" not in embedded
    schema_section = user[end:]
    assert "only_in_tail" in schema_section  # inferred from the complete document
    assert bundle.truncation is not None and bundle.truncation.budget_met


def test_mapping_respects_custom_truncation_config():
    doc = {"rows": list(range(5000))}
    bundle = build_prompt(
        PromptKind.mapping_generate,
        document=doc,
        target_schema={},
        truncation=TruncationConfig(target_bytes=512, n_start=16),
    )
    assert bundle.truncation.bytes <= 512


def test_data_query_uses_document_fragment():
    doc = {"a": {"hidden": 1}, "b": {"shown": 2}}
    bundle = build_prompt(
        PromptKind.data_query, description="what is here?", document=doc, context_path=("b",)
    )
    assert "shown" in bundle.user_content()
    assert "hidden" not in bundle.user_content()


STRIP_CASES = [
    ('```jsonata\n{"a": b}\n```', '{"a": b}'),
    ('{"a": 1}', '{"a": 1}'),
    ("```json\n{}\n```", "{}"),
    ("```\n{}\n```", "{}"),
    ("```JSON\n{}\n```", "{}"),
    ("  ```json\n{\n  \"a\": 1\n}\n```  ", '{\n  "a": 1\n}'),
    ("no fences at all", "no fences at all"),
    ("``` \n{}\n```", "{}"),
    ("```json\nline1\nline2\n```", "line1\nline2"),
    ("```json\n{}\n```\ntrailing prose", "```json\n{}\n```\ntrailing prose"),
    ("leading prose\n```json\n{}\n```", "leading prose\n```json\n{}\n```"),
    ("```json\na `tick` inside\n```", "a `tick` inside"),
    ("```json\ndouble ``ticks`` inside\n```", "double ``ticks`` inside"),
    ("```json\n{}\n``` ", "{}"),
    ("```python\nprint()\n```", "print()"),
    ("plain `inline code` stays", "plain `inline code` stays"),
    ("```json\n```", ""),
    ("```\n```json\n{}\n```\n```", "{}"),
    ('```jsonata\nreagents[role = "metal"].name\n```', 'reagents[role = "metal"].name'),
    ("   surrounded by spaces   ", "surrounded by spaces"),
]


@pytest.mark.parametrize("raw,expected", STRIP_CASES)
def test_strip_artifacts_table(raw, expected):
    assert strip_artifacts(raw) == expected


@pytest.mark.parametrize("raw,expected", STRIP_CASES)
def test_strip_artifacts_idempotent(raw, expected):
    once = strip_artifacts(raw)
    assert strip_artifacts(once) == once
