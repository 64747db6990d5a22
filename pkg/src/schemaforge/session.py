"""Human-in-the-loop proposal state machine.

Every LLM response becomes a proposal that is validated per task kind; apply
is gated on a valid report and nothing else can reach the applied phase.
Raw (un-post-processed) responses are retained in the history.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .document import DataNode, parse_json, with_value_at
from .errors import SchemaForgeError
from .gateway import GatewayConfig, Transport, complete
from .mapping import SyntaxReport, evaluate_mapping, parse_mapping, validate_syntax
from .prompts import DATA_KINDS, QUERY_KINDS, SCHEMA_KINDS, PromptBundle, PromptKind, strip_artifacts
from .schema import SchemaNode, ValidationReport, Violation, merge_subschema, validate_schema


class Phase(str, Enum):
    idle = "idle"
    awaiting_llm = "awaiting_llm"
    proposed = "proposed"
    user_editing = "user_editing"
    applied = "applied"
    discarded = "discarded"


class SessionPhaseError(SchemaForgeError):
    pass


class BlockedApplyError(SchemaForgeError):
    pass


_SUBMITTABLE = (Phase.idle, Phase.proposed, Phase.discarded, Phase.applied)
_EDITABLE = (Phase.proposed, Phase.user_editing)


@dataclass(frozen=True)
class SessionState:
    phase: Phase = Phase.idle
    kind: PromptKind | None = None
    proposal: str = ""
    validation: ValidationReport | SyntaxReport | None = None
    context_path: tuple | None = None
    history: tuple = ()  # of (PromptBundle, raw response text)

    def validation_dict(self) -> dict | None:
        if self.validation is None:
            return None
        if isinstance(self.validation, SyntaxReport):
            return self.validation.to_dict()
        return self.validation.to_dict()

    def to_dict(self) -> dict:
        return {
            "phase": self.phase.value,
            "kind": self.kind.value if self.kind else None,
            "proposal": self.proposal,
            "validation": self.validation_dict(),
            "context_path": list(self.context_path) if self.context_path is not None else None,
            "history": [
                {
                    "kind": bundle.kind.value,
                    "messages": [m.to_dict() for m in bundle.messages],
                    "raw_response": raw,
                }
                for bundle, raw in self.history
            ],
        }


def new_session() -> SessionState:
    return SessionState()


def _validate_proposal(kind: PromptKind, proposal: str):
    if kind in QUERY_KINDS:
        return None
    if kind == PromptKind.mapping_generate:
        return validate_syntax(proposal)
    try:
        parsed = parse_json(proposal)
    except SchemaForgeError as exc:
        return ValidationReport(
            valid=False,
            violations=(Violation((), (), "json", f"proposal is not valid JSON: {exc}"),),
        )
    if kind in SCHEMA_KINDS:
        return validate_schema(parsed)
    return ValidationReport(valid=True)


def submit(
    session: SessionState,
    bundle: PromptBundle,
    config: GatewayConfig,
    transport: Transport | None = None,
) -> SessionState:
    """Send the bundle, store the raw response, validate the stripped proposal.

    Gateway failures propagate and leave the session untouched.
    """
    if session.phase not in _SUBMITTABLE:
        raise SessionPhaseError(f"cannot submit while {session.phase.value}")
    raw = complete(config, list(bundle.messages), transport=transport)
    proposal = strip_artifacts(raw)
    return replace(
        session,
        phase=Phase.proposed,
        kind=bundle.kind,
        proposal=proposal,
        validation=_validate_proposal(bundle.kind, proposal),
        context_path=bundle.context_path,
        history=session.history + ((bundle, raw),),
    )


def user_edit(session: SessionState, edited: str) -> SessionState:
    """Replace the proposal text with the user's edit and re-validate."""
    if session.phase not in _EDITABLE:
        raise SessionPhaseError(f"cannot edit while {session.phase.value}")
    if session.kind is None:
        raise SessionPhaseError("nothing proposed yet")
    return replace(
        session,
        phase=Phase.user_editing,
        proposal=edited,
        validation=_validate_proposal(session.kind, edited),
    )


def discard(session: SessionState) -> SessionState:
    if session.phase not in _EDITABLE:
        raise SessionPhaseError(f"cannot discard while {session.phase.value}")
    return replace(session, phase=Phase.discarded)


def apply(
    session: SessionState,
    schema: SchemaNode | None = None,
    document: DataNode | None = None,
) -> tuple:
    """Apply the valid proposal; returns (new session state, result).

    Schema kinds merge the proposal into `schema` at the session's context
    path; mapping proposals evaluate over the full (untruncated) `document`;
    data kinds replace the document at the context path.  Query kinds have
    nothing to apply.
    """
    if session.phase not in _EDITABLE:
        raise SessionPhaseError(f"cannot apply while {session.phase.value}")
    if session.validation is None or not session.validation.valid:
        raise BlockedApplyError("the proposal is not valid; fix or discard it first")
    kind = session.kind
    if kind in QUERY_KINDS:
        raise BlockedApplyError("query answers are informational; there is nothing to apply")
    path = session.context_path or ()
    if kind in SCHEMA_KINDS:
        if schema is None:
            raise SchemaForgeError("apply needs the current schema for schema kinds")
        result = merge_subschema(schema, path, parse_json(session.proposal))
    elif kind == PromptKind.mapping_generate:
        if document is None:
            raise SchemaForgeError("apply needs the input document for mapping proposals")
        result = evaluate_mapping(parse_mapping(session.proposal), document)
    elif kind in DATA_KINDS:
        if document is None and path:
            raise SchemaForgeError("apply needs the current document for data kinds")
        parsed = parse_json(session.proposal)
        result = with_value_at(document, path, parsed) if path else parsed
    else:  # pragma: no cover - exhaustive over PromptKind
        raise SessionPhaseError(f"apply is not defined for {kind}")
    return replace(session, phase=Phase.applied), result
