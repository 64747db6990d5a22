// Mapping workbench: truncation summary for the current document, an
// editable mapping with debounced syntax validation, preview on a sample,
// and gated apply.

import { ApiError, Client, type JsonValue, type SessionInfo } from "./api.js";
import { applyEnabled, validationLines } from "./state.js";

export interface WorkbenchElements {
  generate: HTMLButtonElement;
  remarks: HTMLInputElement;
  mapping: HTMLTextAreaElement;
  diagnostics: HTMLElement;
  summary: HTMLElement;
  preview: HTMLButtonElement;
  previewOut: HTMLElement;
  apply: HTMLButtonElement;
  error: HTMLElement;
}

export class MappingWorkbench {
  private session: SessionInfo | null = null;
  private lastValidation: { valid: boolean } | null = null;
  private debounceHandle: ReturnType<typeof setTimeout> | null = null;
  private validating: Promise<void> | null = null;

  constructor(
    private client: Client,
    private elements: WorkbenchElements,
    private getProjectId: () => string | null,
    private getDocument: () => JsonValue,
    private onApplied: () => Promise<void>,
    private debounceMs = 250,
  ) {
    elements.generate.addEventListener("click", () => void this.generate());
    elements.preview.addEventListener("click", () => void this.preview());
    elements.apply.addEventListener("click", () => void this.apply());
    elements.mapping.addEventListener("input", () => this.scheduleValidate());
    this.refresh();
  }

  refresh(): void {
    const { elements } = this;
    const editable =
      this.session?.phase === "proposed" || this.session?.phase === "user_editing";
    elements.apply.disabled = !(editable && applyEnabled(this.lastValidation));
    elements.preview.disabled = !elements.mapping.value.trim();
  }

  /** Wait for any in-flight debounced validation (used by tests). */
  async settled(): Promise<void> {
    if (this.debounceHandle !== null) {
      clearTimeout(this.debounceHandle);
      this.debounceHandle = null;
      await this.runValidate();
    }
    if (this.validating) await this.validating;
  }

  private scheduleValidate(): void {
    if (this.debounceHandle !== null) clearTimeout(this.debounceHandle);
    this.debounceHandle = setTimeout(() => {
      this.debounceHandle = null;
      void this.runValidate();
    }, this.debounceMs);
  }

  private async runValidate(): Promise<void> {
    const source = this.elements.mapping.value;
    const task = (async () => {
      try {
        const report = await this.client.validateMapping(source);
        this.lastValidation = report;
        this.elements.diagnostics.textContent = validationLines(report).join("\n");
        this.elements.diagnostics.classList.toggle("invalid", !report.valid);
        if (this.session) {
          // keep the server-side proposal in sync with the editor
          this.session = await this.client.editSession(this.session.id, source);
        }
      } catch (error) {
        this.lastValidation = { valid: false };
        this.elements.diagnostics.textContent =
          error instanceof ApiError ? error.message : String(error);
      }
      this.refresh();
    })();
    this.validating = task;
    await task;
    this.validating = null;
  }

  async showTruncationSummary(): Promise<void> {
    const doc = this.getDocument();
    if (doc === null) {
      this.elements.summary.textContent = "";
      return;
    }
    const outcome = await this.client.truncate(doc);
    this.elements.summary.textContent =
      `final_n=${outcome.final_n} bytes=${outcome.bytes} ` +
      `iterations=${outcome.iterations} budget_met=${outcome.budget_met}`;
  }

  async generate(): Promise<void> {
    const projectId = this.getProjectId();
    if (!projectId) return;
    this.elements.error.textContent = "";
    try {
      const inputs: Record<string, unknown> = {};
      const remarks = this.elements.remarks.value.trim();
      if (remarks) inputs["remarks"] = remarks;
      const session = await this.client.createSession(projectId, "mapping_generate", inputs);
      this.session = session;
      this.elements.mapping.value = session.proposal;
      this.lastValidation = session.validation;
      this.elements.diagnostics.textContent = validationLines(session.validation).join("\n");
      this.elements.diagnostics.classList.toggle(
        "invalid",
        session.validation != null && !session.validation.valid,
      );
      await this.showTruncationSummary();
      this.refresh();
    } catch (error) {
      this.elements.error.textContent =
        error instanceof ApiError ? error.message : String(error);
    }
  }

  async preview(): Promise<void> {
    this.elements.error.textContent = "";
    try {
      const sample = await this.client.truncate(this.getDocument());
      const result = await this.client.evaluateMapping(
        this.elements.mapping.value,
        sample.document,
      );
      this.elements.previewOut.textContent = JSON.stringify(result, null, 2);
    } catch (error) {
      this.elements.previewOut.textContent = "";
      this.elements.error.textContent =
        error instanceof ApiError ? error.message : String(error);
    }
  }

  async apply(): Promise<void> {
    if (!this.session) return;
    this.elements.error.textContent = "";
    try {
      const { session } = await this.client.applySession(this.session.id);
      this.session = session;
      this.refresh();
      await this.onApplied();
    } catch (error) {
      this.elements.error.textContent =
        error instanceof ApiError ? error.message : String(error);
    }
  }
}
