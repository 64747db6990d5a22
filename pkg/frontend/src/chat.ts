// Chat panel: send a natural-language request for the selected task kind,
// show the proposal and its validation report, then accept / edit / discard.
// The accept button mirrors the server gate; the server still answers 409 if
// something slips through (defense in depth).

import { ApiError, Client, type SessionInfo } from "./api.js";
import { sessionApplyEnabled, validationLines, withSession, type ViewState } from "./state.js";

export interface ChatElements {
  kind: HTMLSelectElement;
  message: HTMLTextAreaElement;
  send: HTMLButtonElement;
  transcript: HTMLElement;
  proposal: HTMLTextAreaElement;
  validation: HTMLElement;
  accept: HTMLButtonElement;
  edit: HTMLButtonElement;
  discard: HTMLButtonElement;
  error: HTMLElement;
}

export class ChatPanel {
  constructor(
    private client: Client,
    private elements: ChatElements,
    private state: ViewState,
    private onApplied: () => Promise<void>,
  ) {
    elements.send.addEventListener("click", () => void this.send());
    elements.accept.addEventListener("click", () => void this.accept());
    elements.edit.addEventListener("click", () => void this.edit());
    elements.discard.addEventListener("click", () => void this.discard());
    elements.message.addEventListener("input", () => this.refresh());
    elements.proposal.addEventListener("input", () => {
      this.state.editorBuffer = elements.proposal.value;
    });
    this.refresh();
  }

  refresh(): void {
    const { elements, state } = this;
    elements.send.disabled = !state.projectId || !elements.message.value.trim();
    const editable =
      state.session?.phase === "proposed" || state.session?.phase === "user_editing";
    elements.accept.disabled = !sessionApplyEnabled(state);
    elements.edit.disabled = !editable;
    elements.discard.disabled = !editable;
    elements.proposal.value = state.editorBuffer;
    elements.validation.textContent = state.session
      ? validationLines(state.session.validation).join("\n")
      : "";
    elements.validation.classList.toggle(
      "invalid",
      state.session?.validation != null && !state.session.validation.valid,
    );
  }

  private note(role: string, text: string): void {
    const line = document.createElement("div");
    line.className = `chat-line chat-${role}`;
    line.textContent = `${role}: ${text}`;
    this.elements.transcript.appendChild(line);
  }

  private showError(message: string): void {
    this.elements.error.textContent = message;
  }

  private updateSession(session: SessionInfo): void {
    Object.assign(this.state, withSession(this.state, session));
    this.refresh();
  }

  async send(): Promise<void> {
    const { elements, state } = this;
    if (!state.projectId) return;
    const text = elements.message.value.trim();
    if (!text) return;
    this.showError("");
    this.note("user", text);
    const inputs: Record<string, unknown> = { description: text };
    if (state.selectionPath.length) {
      inputs["context_path"] = state.selectionPath;
    }
    if (state.session?.proposal) {
      inputs["prior_proposal"] = state.session.proposal;
    }
    try {
      const session = await this.client.createSession(
        state.projectId,
        elements.kind.value,
        inputs,
      );
      this.note("assistant", session.proposal);
      elements.message.value = "";
      this.updateSession(session);
    } catch (error) {
      // gateway failures leave the session untouched
      this.showError(error instanceof ApiError ? error.message : String(error));
      this.refresh();
    }
  }

  async accept(): Promise<void> {
    const { state } = this;
    if (!state.session) return;
    this.showError("");
    try {
      const { session } = await this.client.applySession(state.session.id);
      this.updateSession(session);
      await this.onApplied();
    } catch (error) {
      this.showError(error instanceof ApiError ? error.message : String(error));
    }
  }

  async edit(): Promise<void> {
    const { state } = this;
    if (!state.session) return;
    this.showError("");
    try {
      const session = await this.client.editSession(state.session.id, state.editorBuffer);
      this.updateSession(session);
    } catch (error) {
      this.showError(error instanceof ApiError ? error.message : String(error));
    }
  }

  async discard(): Promise<void> {
    const { state } = this;
    if (!state.session) return;
    this.showError("");
    try {
      const session = await this.client.discardSession(state.session.id);
      this.updateSession(session);
      this.state.editorBuffer = "";
      this.refresh();
    } catch (error) {
      this.showError(error instanceof ApiError ? error.message : String(error));
    }
  }
}
