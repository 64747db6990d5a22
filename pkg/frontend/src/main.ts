// Wires the panels to the DOM. The page is a static bundle served by the
// schemaforge service at /.

import { Client, type JsonValue } from "./api.js";
import { ChatPanel, type ChatElements } from "./chat.js";
import { initialState, type ViewState } from "./state.js";
import { renderSchemaTree } from "./tree.js";
import { MappingWorkbench, type WorkbenchElements } from "./workbench.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export interface App {
  state: ViewState;
  chat: ChatPanel;
  workbench: MappingWorkbench;
  newProject: () => Promise<void>;
  importDocument: (text: string) => Promise<void>;
  importSchema: (text: string) => Promise<void>;
  refreshTree: () => Promise<void>;
}

export function bootstrap(baseUrl = ""): App {
  const client = new Client(baseUrl);
  const state = initialState();
  let currentDocument: JsonValue = null;

  const tree = element<HTMLDivElement>("tree");
  const selectionLabel = element<HTMLSpanElement>("selection");
  const projectLabel = element<HTMLSpanElement>("project-id");

  const chatElements: ChatElements = {
    kind: element<HTMLSelectElement>("chat-kind"),
    message: element<HTMLTextAreaElement>("chat-message"),
    send: element<HTMLButtonElement>("chat-send"),
    transcript: element<HTMLDivElement>("chat-transcript"),
    proposal: element<HTMLTextAreaElement>("chat-proposal"),
    validation: element<HTMLDivElement>("chat-validation"),
    accept: element<HTMLButtonElement>("chat-accept"),
    edit: element<HTMLButtonElement>("chat-edit"),
    discard: element<HTMLButtonElement>("chat-discard"),
    error: element<HTMLDivElement>("chat-error"),
  };

  const workbenchElements: WorkbenchElements = {
    generate: element<HTMLButtonElement>("map-generate"),
    remarks: element<HTMLInputElement>("map-remarks"),
    mapping: element<HTMLTextAreaElement>("map-source"),
    diagnostics: element<HTMLDivElement>("map-diagnostics"),
    summary: element<HTMLDivElement>("map-summary"),
    preview: element<HTMLButtonElement>("map-preview"),
    previewOut: element<HTMLPreElement>("map-preview-out"),
    apply: element<HTMLButtonElement>("map-apply"),
    error: element<HTMLDivElement>("map-error"),
  };

  async function refreshTree(): Promise<void> {
    if (!state.projectId) return;
    const project = await client.getProject(state.projectId);
    currentDocument = project.document;
    renderSchemaTree(project.schema, tree, {
      onSelect: (path) => {
        state.selectionPath = path;
        selectionLabel.textContent = path.length ? JSON.stringify(path) : "(root)";
        chat.refresh();
      },
    });
  }

  const chat = new ChatPanel(client, chatElements, state, refreshTree);
  const workbench = new MappingWorkbench(
    client,
    workbenchElements,
    () => state.projectId,
    () => currentDocument,
    refreshTree,
  );

  async function newProject(): Promise<void> {
    const project = await client.createProject();
    state.projectId = project.id;
    state.selectionPath = [];
    projectLabel.textContent = project.id;
    selectionLabel.textContent = "(root)";
    await refreshTree();
    chat.refresh();
  }

  async function importDocument(text: string): Promise<void> {
    if (!state.projectId) return;
    await client.putDocument(state.projectId, JSON.parse(text));
    await refreshTree();
    await workbench.showTruncationSummary();
  }

  async function importSchema(text: string): Promise<void> {
    if (!state.projectId) return;
    await client.putSchema(state.projectId, JSON.parse(text));
    await refreshTree();
  }

  element<HTMLButtonElement>("project-new").addEventListener("click", () => void newProject());
  const documentInput = element<HTMLTextAreaElement>("import-text");
  element<HTMLButtonElement>("import-document").addEventListener("click", () => {
    void importDocument(documentInput.value);
  });
  element<HTMLButtonElement>("import-schema").addEventListener("click", () => {
    void importSchema(documentInput.value);
  });

  return { state, chat, workbench, newProject, importDocument, importSchema, refreshTree };
}

declare global {
  interface Window {
    schemaforge?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("tree")) {
  window.schemaforge = bootstrap();
}
