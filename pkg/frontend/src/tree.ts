// Collapsible schema tree: property names, types, required markers, and
// clickable $ref chips that jump to the referenced $defs entry. Clicking a
// node label selects it; the selection path becomes the modification context.

import type { JsonValue, PathSegment } from "./api.js";

export interface TreeCallbacks {
  onSelect: (path: PathSegment[]) => void;
}

function isObject(value: JsonValue): value is { [key: string]: JsonValue } {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function typeLabel(schema: JsonValue): string {
  if (!isObject(schema)) return schema === true ? "any" : schema === false ? "never" : "";
  const type = schema["type"];
  if (typeof type === "string") return type;
  if (Array.isArray(type)) return type.map(String).join(" | ");
  if (typeof schema["$ref"] === "string") return "";
  if (schema["anyOf"]) return "anyOf";
  if (schema["oneOf"]) return "oneOf";
  if (schema["allOf"]) return "allOf";
  return "";
}

function refAnchor(pointer: string): string {
  return "def-" + pointer.replace(/[^A-Za-z0-9_-]/g, "_");
}

export function renderSchemaTree(
  schema: JsonValue,
  container: HTMLElement,
  callbacks: TreeCallbacks,
): void {
  container.textContent = "";
  container.appendChild(buildNode("(schema)", schema, [], false, callbacks, container));
}

function buildNode(
  label: string,
  schema: JsonValue,
  path: PathSegment[],
  required: boolean,
  callbacks: TreeCallbacks,
  root: HTMLElement,
): HTMLElement {
  const details = document.createElement("details");
  details.open = path.length < 4;
  details.className = "tree-node";
  const summary = document.createElement("summary");

  const name = document.createElement("span");
  name.className = "tree-label";
  name.textContent = label;
  name.dataset.path = JSON.stringify(path);
  name.addEventListener("click", (event) => {
    event.preventDefault();
    root
      .querySelectorAll(".tree-label.selected")
      .forEach((el) => el.classList.remove("selected"));
    name.classList.add("selected");
    callbacks.onSelect(path);
  });
  summary.appendChild(name);

  if (required) {
    const marker = document.createElement("span");
    marker.className = "tree-required";
    marker.textContent = "required";
    summary.appendChild(marker);
  }

  const type = typeLabel(schema);
  if (type) {
    const badge = document.createElement("span");
    badge.className = "tree-type";
    badge.textContent = type;
    summary.appendChild(badge);
  }

  if (isObject(schema) && typeof schema["$ref"] === "string") {
    const pointer = schema["$ref"];
    const chip = document.createElement("a");
    chip.className = "ref-chip";
    chip.textContent = pointer;
    chip.href = "#" + refAnchor(pointer);
    chip.addEventListener("click", (event) => {
      event.preventDefault();
      const target = root.querySelector<HTMLElement>("#" + refAnchor(pointer));
      if (target) {
        target.scrollIntoView();
        target.classList.add("flash");
        setTimeout(() => target.classList.remove("flash"), 600);
      }
    });
    summary.appendChild(chip);
  }

  details.appendChild(summary);

  if (isObject(schema)) {
    const requiredSet = new Set(
      Array.isArray(schema["required"]) ? schema["required"].map(String) : [],
    );
    const properties = schema["properties"];
    if (isObject(properties)) {
      for (const [key, child] of Object.entries(properties)) {
        details.appendChild(
          buildNode(
            key,
            child,
            [...path, "properties", key],
            requiredSet.has(key),
            callbacks,
            root,
          ),
        );
      }
    }
    if ("items" in schema) {
      details.appendChild(
        buildNode("items", schema["items"] as JsonValue, [...path, "items"], false, callbacks, root),
      );
    }
    const defs = schema["$defs"];
    if (isObject(defs)) {
      for (const [key, child] of Object.entries(defs)) {
        const node = buildNode(key, child, [...path, "$defs", key], false, callbacks, root);
        node.id = refAnchor(`#/$defs/${key}`);
        node.classList.add("def-node");
        details.appendChild(node);
      }
    }
  }
  return details;
}
