import pytest

from schemaforge.document import parse_json, structurally_equal
from schemaforge.schema import (
    ClosureError,
    MergeRejectedError,
    RefResolutionError,
    merge_subschema,
    select_subschema,
    validate_instance,
    validate_schema,
)

FIG3_TARGET_SCHEMA = parse_json(
    """{
  "type": "object",
  "properties": {
    "materialId": { "type": "string" },
    "metal": { "type": "string" },
    "linkers": {
      "type": "array",
      "items": { "type": "string" }
    }
  }
}"""
)

FIG3_OUTPUT = parse_json(
    '{"materialId":"mof-123","metal":"ZrCl4","linkers":["BDC","DABCO"]}'
)


def test_fig3_output_validates():
    assert validate_instance(FIG3_OUTPUT, FIG3_TARGET_SCHEMA).valid


def test_empty_schema_accepts_anything():
    for doc in (None, True, 5, "x", [1], {"a": 1}):
        assert validate_instance(doc, {}).valid


def test_type_violation_reported_with_paths():
    report = validate_instance({"metal": 5}, FIG3_TARGET_SCHEMA)
    assert not report.valid
    v = report.violations[0]
    assert v.instance_path == ("metal",)
    assert v.keyword == "type"
    assert "string" in v.message


def test_integer_accepted_as_number():
    assert validate_instance(3, {"type": "number"}).valid


def test_integral_decimal_accepted_as_integer():
    assert validate_instance(parse_json("3.0"), {"type": "integer"}).valid
    assert not validate_instance(parse_json("3.5"), {"type": "integer"}).valid


def test_bool_is_not_number():
    assert not validate_instance(True, {"type": "number"}).valid


def test_type_list():
    schema = {"type": ["string", "null"]}
    assert validate_instance(None, schema).valid
    assert validate_instance("x", schema).valid
    assert not validate_instance(1, schema).valid


def test_required_and_properties():
    schema = {"type": "object", "required": ["a"], "properties": {"a": {"type": "integer"}}}
    assert validate_instance({"a": 1}, schema).valid
    report = validate_instance({}, schema)
    assert [v.keyword for v in report.violations] == ["required"]


def test_enum_and_const_use_json_equality():
    assert validate_instance(parse_json("1.0"), {"enum": [1]}).valid
    assert not validate_instance(True, {"enum": [1]}).valid
    assert validate_instance({"b": 1, "a": 2}, {"const": {"a": 2, "b": 1}}).valid


def test_combinators():
    any_of = {"anyOf": [{"type": "string"}, {"type": "integer"}]}
    assert validate_instance("x", any_of).valid
    assert not validate_instance(None, any_of).valid
    one_of = {"oneOf": [{"type": "integer"}, {"type": "number"}]}
    assert not validate_instance(1, one_of).valid  # matches both branches
    all_of = {"allOf": [{"type": "integer"}, {"minimum": 3}]}
    assert validate_instance(4, all_of).valid
    assert not validate_instance(2, all_of).valid


def test_bounds_and_lengths_and_pattern():
    assert not validate_instance(2, {"minimum": 3}).valid
    assert not validate_instance(5, {"maximum": 4}).valid
    assert not validate_instance("ab", {"minLength": 3}).valid
    assert not validate_instance("abcd", {"maxLength": 3}).valid
    assert validate_instance("mof-123", {"pattern": "^mof-"}).valid
    assert not validate_instance("x", {"pattern": "^mof-"}).valid


def test_additional_and_pattern_properties():
    schema = {
        "properties": {"a": {"type": "integer"}},
        "patternProperties": {"^x": {"type": "string"}},
        "additionalProperties": False,
    }
    assert validate_instance({"a": 1, "xray": "s"}, schema).valid
    report = validate_instance({"other": 1}, schema)
    assert report.violations[0].keyword == "additionalProperties"


def test_ref_resolution_and_dangling_ref():
    schema = {
        "type": "object",
        "properties": {"c": {"$ref": "#/$defs/compound"}},
        "$defs": {"compound": {"type": "object", "required": ["name"]}},
    }
    assert validate_instance({"c": {"name": "x"}}, schema).valid
    assert not validate_instance({"c": {}}, schema).valid
    dangling = {"properties": {"c": {"$ref": "#/$defs/nope"}}}
    with pytest.raises(RefResolutionError):
        validate_instance({"c": 1}, dangling)


def test_annotations_never_violate():
    schema = {"title": 5, "description": None, "format": "no-such-format"}
    assert validate_instance("anything", schema).valid


def test_unknown_keywords_ignored():
    assert validate_instance({"a": 1}, {"unevaluatedProperties": False, "x-custom": 1}).valid


def test_validate_schema_fig3_and_empty():
    assert validate_schema(FIG3_TARGET_SCHEMA).valid
    assert validate_schema({}).valid


def test_validate_schema_unknown_type_name():
    report = validate_schema({"type": "strng"})
    assert not report.valid
    v = report.violations[0]
    assert v.schema_path == ("type",)
    assert "strng" in v.message


def test_validate_schema_structural_errors():
    assert not validate_schema({"properties": []}).valid
    assert not validate_schema({"required": ["a", "a"]}).valid
    assert not validate_schema({"required": "a"}).valid
    assert not validate_schema({"$ref": "#/$defs/nope"}).valid
    assert not validate_schema({"$ref": "https://x/y"}).valid
    assert not validate_schema({"pattern": "("}).valid
    assert not validate_schema({"minLength": -1}).valid
    assert validate_schema(True).valid


def test_validate_schema_nested():
    report = validate_schema({"items": {"type": "strng"}})
    assert not report.valid
    assert report.violations[0].schema_path == ("items", "type")


FIG2_SCHEMA = {
    "type": "object",
    "properties": {
        "experiments": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "metal_salt": {"$ref": "#/$defs/compound"},
                    "ligand": {"$ref": "#/$defs/compound"},
                },
            },
        }
    },
    "$defs": {
        "compound": {
            "type": "object",
            "properties": {
                "name": {"type": "string"},
                "mass": {"type": "number"},
                "inchi": {"type": "string"},
            },
            "required": ["name", "mass", "inchi"],
        }
    },
}


def test_select_subschema_def_itself():
    out = select_subschema(FIG2_SCHEMA, ("$defs", "compound"))
    assert set(out["properties"]) == {"name", "mass", "inchi"}


def test_select_subschema_root():
    assert select_subschema(FIG2_SCHEMA, ()) == FIG2_SCHEMA


def test_select_subschema_closure():
    schema = {
        "properties": {"a": {"$ref": "#/$defs/x"}},
        "$defs": {"x": {"items": {"$ref": "#/$defs/y"}}, "y": {"type": "string"}, "z": {}},
    }
    out = select_subschema(schema, ("properties", "a"))
    assert set(out["$defs"]) == {"x", "y"}
    # standalone: validation never hits an unresolvable ref
    validate_instance([["s"]], out)


def test_select_subschema_cycle_preserved():
    schema = {
        "properties": {"a": {"$ref": "#/$defs/node"}},
        "$defs": {"node": {"properties": {"next": {"$ref": "#/$defs/node"}}}},
    }
    out = select_subschema(schema, ("properties", "a"))
    assert "node" in out["$defs"]
    assert validate_instance({"next": {"next": {}}}, out).valid


def test_select_subschema_non_defs_ref_errors():
    schema = {"properties": {"a": {"$ref": "#/properties/b"}, "b": {}}}
    with pytest.raises(ClosureError):
        select_subschema(schema, ("properties", "a"))


def test_merge_subschema_fig2_flow():
    before = {
        "type": "object",
        "properties": {
            "metal_salt": {"type": "object", "properties": {"name": {"type": "string"}}},
            "ligand": {"type": "object", "properties": {"name": {"type": "string"}}},
        },
        "$defs": {"compound": FIG2_SCHEMA["$defs"]["compound"]},
    }
    out = merge_subschema(before, ("properties", "ligand"), {"$ref": "#/$defs/compound"})
    assert out["properties"]["ligand"] == {"$ref": "#/$defs/compound"}
    assert out["properties"]["metal_salt"] == before["properties"]["metal_salt"]


def test_merge_subschema_identity_at_root():
    assert structurally_equal(merge_subschema(FIG2_SCHEMA, (), FIG2_SCHEMA), FIG2_SCHEMA)


def test_merge_subschema_def_collision_renames_and_rewrites():
    root = {
        "type": "object",
        "properties": {"a": {}},
        "$defs": {"compound": {"type": "string"}},
    }
    replacement = {
        "$ref": "#/$defs/compound",
        "$defs": {"compound": {"type": "object"}},
    }
    out = merge_subschema(root, ("properties", "a"), replacement)
    assert out["$defs"]["compound"] == {"type": "string"}
    assert out["$defs"]["compound2"] == {"type": "object"}
    assert out["properties"]["a"]["$ref"] == "#/$defs/compound2"


def test_merge_subschema_identical_def_reused():
    root = {"properties": {"a": {}}, "$defs": {"c": {"type": "string"}}}
    replacement = {"$ref": "#/$defs/c", "$defs": {"c": {"type": "string"}}}
    out = merge_subschema(root, ("properties", "a"), replacement)
    assert list(out["$defs"]) == ["c"]
    assert out["properties"]["a"]["$ref"] == "#/$defs/c"


def test_merge_subschema_rejects_invalid_result():
    with pytest.raises(MergeRejectedError) as err:
        merge_subschema({"properties": {"a": {}}}, ("properties", "a"), {"type": "strng"})
    assert not err.value.report.valid


def test_merge_then_select_recovers_replacement():
    replacement = {"type": "array", "items": {"type": "integer"}}
    merged = merge_subschema(FIG2_SCHEMA, ("properties", "experiments"), replacement)
    assert select_subschema(merged, ("properties", "experiments")) == replacement
