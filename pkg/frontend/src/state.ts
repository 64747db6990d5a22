// View state and the one rule the UI owns: apply is enabled exactly while
// the latest validation response is valid. Everything else lives server-side.

import type { PathSegment, SessionInfo, ValidationReport } from "./api.js";

export interface ViewState {
  projectId: string | null;
  session: SessionInfo | null;
  editorBuffer: string;
  selectionPath: PathSegment[];
}

export function initialState(): ViewState {
  return { projectId: null, session: null, editorBuffer: "", selectionPath: [] };
}

export function withSession(state: ViewState, session: SessionInfo): ViewState {
  return { ...state, session, editorBuffer: session.proposal };
}

export function applyEnabled(validation: ValidationReport | null | undefined): boolean {
  return validation != null && validation.valid === true;
}

export function sessionApplyEnabled(state: ViewState): boolean {
  if (!state.session) return false;
  if (state.session.phase !== "proposed" && state.session.phase !== "user_editing") {
    return false;
  }
  return applyEnabled(state.session.validation);
}

export function validationLines(validation: ValidationReport | null | undefined): string[] {
  if (!validation) return [];
  if (validation.valid) return ["valid"];
  const lines: string[] = [];
  for (const violation of validation.violations ?? []) {
    const where = violation.instance_path.length
      ? `/${violation.instance_path.join("/")}`
      : "(root)";
    lines.push(`${where} ${violation.keyword}: ${violation.message}`);
  }
  for (const rendered of validation.rendered ?? []) {
    lines.push(rendered);
  }
  if (!lines.length && validation.diagnostics) {
    for (const diagnostic of validation.diagnostics) {
      lines.push(`offset ${diagnostic.offset}: ${diagnostic.message}`);
    }
  }
  return lines.length ? lines : ["invalid"];
}
