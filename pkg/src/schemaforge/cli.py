"""Command-line entry point for every pipeline stage; fully scriptable offline.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 gateway error.
Data goes to stdout as JSON (or YAML on request); diagnostics go to stderr.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import document as doc_mod
from .document import parse_json, pointer_to_path, serialize_json, to_yaml
from .errors import SchemaForgeError
from .gateway import (
    GatewayError,
    HttpTransport,
    RecordingTransport,
    ReplayTransport,
    config_from_env,
)
from .infer import infer_schema
from .mapping import evaluate_mapping, parse_mapping, validate_syntax
from .prompts import PromptKind, build_prompt
from .schema import serialize_schema, validate_instance
from .session import apply as session_apply, discard, new_session, submit, user_edit
from .truncate import TruncationConfig, truncate_document

_EXIT_VALIDATION = 1
_EXIT_GATEWAY = 3


def _read_document(path: str):
    text = Path(path).read_text(encoding="utf-8")
    suffix = Path(path).suffix.lower()
    if suffix in (".yaml", ".yml"):
        return doc_mod.from_yaml(text)
    if suffix == ".xml":
        return doc_mod.from_xml(text)
    if suffix == ".csv":
        return doc_mod.from_csv(text)
    return parse_json(text)


def _note(message: str) -> None:
    click.echo(message, err=True)


def truncation_options(fn):
    fn = click.option("--truncate-target-bytes", type=int, default=65536, show_default=True)(fn)
    fn = click.option("--truncate-n-start", type=int, default=64, show_default=True)(fn)
    fn = click.option("--truncate-n-min", type=int, default=2, show_default=True)(fn)
    fn = click.option("--truncate-prop-factor", type=int, default=8, show_default=True)(fn)
    return fn


def _truncation_config(kwargs) -> TruncationConfig:
    return TruncationConfig(
        target_bytes=kwargs.pop("truncate_target_bytes"),
        n_start=kwargs.pop("truncate_n_start"),
        n_min=kwargs.pop("truncate_n_min"),
        property_factor=kwargs.pop("truncate_prop_factor"),
    )


@click.group()
@click.option("--endpoint", default=None, help="OpenAI-compatible base URL.")
@click.option("--model", default=None, help="Model name, e.g. gpt-4o-mini.")
@click.option(
    "--replay",
    "replay_dir",
    default=None,
    type=click.Path(),
    help="Answer from recorded fixtures in this directory instead of the network.",
)
@click.option(
    "--record",
    is_flag=True,
    help="With --replay DIR: call the live endpoint and record fixtures into DIR.",
)
@click.pass_context
def main(ctx, endpoint, model, replay_dir, record):
    """AI-assisted JSON Schema creation, editing, and deterministic mapping."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = config_from_env(base_url=endpoint, model=model)
    if record:
        if not replay_dir:
            raise click.UsageError("--record needs --replay DIR to know where to store fixtures")
        ctx.obj["transport"] = RecordingTransport(HttpTransport(), replay_dir)
    elif replay_dir:
        ctx.obj["transport"] = ReplayTransport(replay_dir)
    else:
        ctx.obj["transport"] = None  # live


@main.command()
@click.argument("source", type=click.Path(exists=True))
@click.option("--to", "target", type=click.Choice(["json", "yaml"]), default="json", show_default=True)
def convert(source, target):
    """Convert a JSON/YAML/XML/CSV file (detected by extension) to JSON or YAML."""
    doc = _read_document(source)
    if target == "yaml":
        click.echo(to_yaml(doc).rstrip("\n"))
    else:
        click.echo(serialize_json(doc))


@main.command()
@click.argument("source", type=click.Path(exists=True))
def infer(source):
    """Infer a JSON Schema from a document instance."""
    doc = _read_document(source)
    click.echo(serialize_schema(infer_schema(doc)).rstrip("\n"))


@main.command()
@click.argument("source", type=click.Path(exists=True))
@click.option("--schema", "schema_path", required=True, type=click.Path(exists=True))
@click.pass_context
def validate(ctx, source, schema_path):
    """Validate a document against a schema; exit 1 when invalid."""
    doc = _read_document(source)
    schema = parse_json(Path(schema_path).read_text(encoding="utf-8"))
    report = validate_instance(doc, schema)
    click.echo(serialize_json(report.to_dict()))
    if not report.valid:
        ctx.exit(_EXIT_VALIDATION)


@main.command()
@click.argument("source", type=click.Path(exists=True))
@truncation_options
def truncate(source, **kwargs):
    """Truncate a document to the byte budget; summary goes to stderr."""
    cfg = _truncation_config(kwargs)
    outcome = truncate_document(_read_document(source), cfg)
    _note(serialize_json({"status": "ok", **outcome.summary()}))
    click.echo(serialize_json(outcome.doc))


@main.group()
def schema():
    """Schema assistance commands."""


@schema.command("chat")
@click.option("--schema", "schema_path", default=None, type=click.Path(exists=True))
@click.option("--select", "pointer", default="", help="JSON Pointer to the sub-schema used as modification context.")
@click.pass_context
def schema_chat(ctx, schema_path, pointer):
    """Interactive loop: prompt, proposal, validation, then accept/edit/discard.

    Reads lines from stdin.  A plain line is sent to the assistant; commands
    start with ':' -> :accept applies the valid proposal, :edit TEXT replaces
    it, :discard drops it, :quit leaves.  The final schema is printed to
    stdout on exit.
    """
    config = ctx.obj["config"]
    transport = ctx.obj["transport"]
    current = (
        parse_json(Path(schema_path).read_text(encoding="utf-8")) if schema_path else {}
    )
    context_path = pointer_to_path(pointer) if pointer else ()
    state = new_session()
    last_proposal = None
    for raw_line in sys.stdin:
        line = raw_line.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith(":"):
            command, _, argument = line.partition(" ")
            if command == ":quit":
                break
            try:
                if command == ":edit":
                    state = user_edit(state, argument)
                    _show_state(state)
                elif command == ":discard":
                    state = discard(state)
                    _note("discarded")
                elif command == ":accept":
                    state, current = session_apply(state, schema=current)
                    last_proposal = None
                    _note("applied")
                else:
                    _note(f"unknown command {command}; use :accept :edit :discard :quit")
            except SchemaForgeError as exc:
                if isinstance(exc, GatewayError):
                    raise
                _note(f"error: {exc}")
            continue
        kind = PromptKind.schema_modify if (current or schema_path) else PromptKind.schema_create
        bundle = build_prompt(
            kind,
            description=line,
            schema=current if kind is PromptKind.schema_modify else None,
            context_path=context_path if kind is PromptKind.schema_modify else None,
            prior_proposal=last_proposal,
        )
        state = submit(state, bundle, config, transport)
        last_proposal = state.proposal
        _show_state(state)
    click.echo(serialize_schema(current).rstrip("\n"))


def _show_state(state) -> None:
    _note("proposal:")
    _note(state.proposal)
    if state.validation is None:
        return
    verdict = "valid" if state.validation.valid else "INVALID"
    _note(f"validation: {verdict}")
    report = state.validation_dict()
    problems = report.get("violations") or report.get("diagnostics") or []
    for problem in problems:
        _note(f"  {serialize_json(problem)}")


@main.group(name="map")
def map_group():
    """Mapping generation and deterministic application."""


@map_group.command("generate")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--target-schema", "target_path", required=True, type=click.Path(exists=True))
@click.option("--remarks", default=None)
@truncation_options
@click.pass_context
def map_generate(ctx, input_path, target_path, remarks, **kwargs):
    """Generate a mapping for INPUT -> TARGET SCHEMA; prints mapping + report."""
    cfg = _truncation_config(kwargs)
    doc = _read_document(input_path)
    target = parse_json(Path(target_path).read_text(encoding="utf-8"))
    bundle = build_prompt(
        PromptKind.mapping_generate,
        document=doc,
        target_schema=target,
        remarks=remarks,
        truncation=cfg,
    )
    state = submit(new_session(), bundle, ctx.obj["config"], ctx.obj["transport"])
    report = state.validation
    click.echo(
        serialize_json(
            {
                "mapping": state.proposal,
                "valid": report.valid,
                "diagnostics": report.to_dict(state.proposal)["rendered"],
            }
        )
    )
    if not report.valid:
        ctx.exit(_EXIT_VALIDATION)


@map_group.command("apply")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--mapping", "mapping_path", required=True, type=click.Path(exists=True))
@click.pass_context
def map_apply(ctx, input_path, mapping_path):
    """Deterministically apply a mapping file (.jnt) to the input document."""
    doc = _read_document(input_path)
    source = Path(mapping_path).read_text(encoding="utf-8")
    report = validate_syntax(source)
    if not report.valid:
        for line in report.rendered(source):
            _note(line)
        ctx.exit(_EXIT_VALIDATION)
    result = evaluate_mapping(parse_mapping(source), doc)
    click.echo(serialize_json(result))


@main.command()
@click.option("--port", default=8817, show_default=True, type=int)
@click.option("--data-dir", default="./schemaforge-data", show_default=True, type=click.Path())
@click.option("--static-dir", default=None, type=click.Path(), help="Directory with the web UI bundle to serve at /.")
@click.pass_context
def serve(ctx, port, data_dir, static_dir):
    """Run the HTTP service (web UI, sessions, conversions)."""
    import uvicorn

    from .service import create_app

    app = create_app(
        data_dir,
        config=ctx.obj["config"],
        transport=ctx.obj["transport"],
        static_dir=static_dir,
    )
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")


def run() -> None:
    """Console entry point with package error-to-exit-code mapping."""
    try:
        # standalone_mode=False returns ctx.exit codes instead of raising
        code = main(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(2)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(130)
    except GatewayError as exc:
        _note(f"gateway error: {exc}")
        sys.exit(_EXIT_GATEWAY)
    except SchemaForgeError as exc:
        _note(f"error: {exc}")
        sys.exit(_EXIT_VALIDATION)
    if isinstance(code, int):
        sys.exit(code)


if __name__ == "__main__":
    run()
