// @vitest-environment jsdom
// Drives the real UI (DOM events) against the real service running with the
// replay transport: Fig. 1 schema creation, Fig. 2 modification, Fig. 3
// mapping, and the apply-gating behavior.

import { readFileSync } from "node:fs";
import { join, resolve } from "node:path";
import { beforeAll, describe, expect, inject, it } from "vitest";

import { bootstrap, type App } from "../src/main.js";

const baseUrl = inject("baseUrl");
const fixturesDir = inject("fixturesDir");

interface Manifest {
  fig1_prompt: string;
  fig2_prompt: string;
  fig3_input: string;
  fig3_target: string;
  fig3_mapping: string;
  fig3_output: string;
  fig2_text: string;
  invalid_prompt: string;
}

let app: App;
let manifest: Manifest;

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function setValue(el: HTMLTextAreaElement | HTMLInputElement, value: string): void {
  el.value = value;
  el.dispatchEvent(new Event("input", { bubbles: true }));
}

async function flush(): Promise<void> {
  // let queued microtasks from click handlers settle
  for (let i = 0; i < 20; i += 1) {
    await new Promise((r) => setTimeout(r, 10));
  }
}

beforeAll(() => {
  manifest = JSON.parse(readFileSync(join(fixturesDir, "manifest.json"), "utf-8"));
  const html = readFileSync(resolve(__dirname, "..", "index.html"), "utf-8");
  const body = html.slice(html.indexOf("<body>") + 6, html.indexOf("</body>"));
  document.body.innerHTML = body;
  app = bootstrap(baseUrl);
});

describe("webui against the replay server", () => {
  it("serves the static bundle at /", async () => {
    const page = await fetch(`${baseUrl}/`);
    expect(page.ok).toBe(true);
    expect(await page.text()).toContain("Mapping workbench");
    const script = await fetch(`${baseUrl}/dist/main.js`);
    expect(script.ok).toBe(true);
  });

  it("fig. 1: creates a schema from the chat prompt", async () => {
    byId<HTMLButtonElement>("project-new").click();
    await flush();
    expect(byId("project-id").textContent).toMatch(/^proj-/);

    byId<HTMLSelectElement>("chat-kind").value = "schema_create";
    setValue(byId<HTMLTextAreaElement>("chat-message"), manifest.fig1_prompt);
    expect(byId<HTMLButtonElement>("chat-send").disabled).toBe(false);
    byId<HTMLButtonElement>("chat-send").click();
    await flush();

    expect(byId("chat-validation").textContent).toBe("valid");
    expect(byId<HTMLButtonElement>("chat-accept").disabled).toBe(false);
    byId<HTMLButtonElement>("chat-accept").click();
    await flush();

    const tree = byId("tree").textContent ?? "";
    expect(tree).toContain("experiments");
    expect(tree).toContain("ligand");
    expect(tree).toContain("metal_salt");
    expect(byId<HTMLButtonElement>("chat-accept").disabled).toBe(true); // applied
  });

  it("fig. 2: modification introduces a compound class referenced twice", async () => {
    byId<HTMLSelectElement>("chat-kind").value = "schema_modify";
    setValue(byId<HTMLTextAreaElement>("chat-message"), manifest.fig2_prompt);
    byId<HTMLButtonElement>("chat-send").click();
    await flush();
    expect(byId("chat-validation").textContent).toBe("valid");

    // gating: an invalid manual edit disables accept, fixing it re-enables
    setValue(byId<HTMLTextAreaElement>("chat-proposal"), '{"type":"strng"}');
    byId<HTMLButtonElement>("chat-edit").click();
    await flush();
    expect(byId("chat-validation").textContent).toContain("unknown type");
    expect(byId<HTMLButtonElement>("chat-accept").disabled).toBe(true);

    setValue(byId<HTMLTextAreaElement>("chat-proposal"), manifest.fig2_text);
    byId<HTMLButtonElement>("chat-edit").click();
    await flush();
    expect(byId<HTMLButtonElement>("chat-accept").disabled).toBe(false);

    byId<HTMLButtonElement>("chat-accept").click();
    await flush();
    const chips = [...document.querySelectorAll(".ref-chip")];
    expect(chips.map((c) => c.textContent)).toEqual(["#/$defs/compound", "#/$defs/compound"]);
    expect(byId("tree").textContent).toContain("compound");
  });

  it("fig. 3: mapping workbench generates, previews, gates, and applies", async () => {
    byId<HTMLButtonElement>("project-new").click();
    await flush();
    setValue(byId<HTMLTextAreaElement>("import-text"), manifest.fig3_input);
    byId<HTMLButtonElement>("import-document").click();
    await flush();
    setValue(byId<HTMLTextAreaElement>("import-text"), manifest.fig3_target);
    byId<HTMLButtonElement>("import-schema").click();
    await flush();
    expect(byId("map-summary").textContent).toContain("budget_met=true");

    byId<HTMLButtonElement>("map-generate").click();
    await flush();
    const mapping = byId<HTMLTextAreaElement>("map-source").value;
    expect(mapping).toContain('reagents[role = "metal"].name');
    expect(byId("map-diagnostics").textContent).toBe("valid");
    expect(byId<HTMLButtonElement>("map-apply").disabled).toBe(false);

    // introduce a syntax error: apply must disable with a diagnostic shown
    setValue(byId<HTMLTextAreaElement>("map-source"), 'reagents[role = ');
    await app.workbench.settled();
    expect(byId<HTMLButtonElement>("map-apply").disabled).toBe(true);
    expect(byId("map-diagnostics").textContent).toMatch(/\d+:\d+ /);

    setValue(byId<HTMLTextAreaElement>("map-source"), mapping);
    await app.workbench.settled();
    expect(byId<HTMLButtonElement>("map-apply").disabled).toBe(false);

    byId<HTMLButtonElement>("map-preview").click();
    await flush();
    expect(JSON.parse(byId("map-preview-out").textContent ?? "")).toEqual(
      JSON.parse(manifest.fig3_output),
    );

    byId<HTMLButtonElement>("map-apply").click();
    await flush();
    const project = await (await fetch(`${baseUrl}/projects/${app.state.projectId}`)).json();
    expect(project.project.document).toEqual(JSON.parse(manifest.fig3_output));
    expect(byId<HTMLButtonElement>("map-apply").disabled).toBe(true); // applied
  });

  it("server gate answers 409 if the UI is bypassed", async () => {
    const created = await (
      await fetch(`${baseUrl}/projects`, { method: "POST", body: "{}" })
    ).json();
    const pid = created.project.id;
    const sessionResponse = await fetch(`${baseUrl}/projects/${pid}/sessions`, {
      method: "POST",
      body: JSON.stringify({
        kind: "schema_create",
        inputs: { description: manifest.invalid_prompt },
      }),
    });
    const session = (await sessionResponse.json()).session;
    expect(session.validation.valid).toBe(false);
    const applied = await fetch(`${baseUrl}/sessions/${session.id}/apply`, { method: "POST" });
    expect(applied.status).toBe(409);
  });
});
