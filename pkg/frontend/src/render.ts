/**
 * Pure view layer: draws the received snapshot and inspectors into a
 * container. No world semantics live here; everything rendered comes
 * straight off the frames, so the view can never disagree with the
 * engine.
 */

import type { SnapshotFrame, WorldObject } from "./protocol.js";

const SVG_NS = "http://www.w3.org/2000/svg";

// Workspace bounds in meters, matching the engine scenarios.
const WORLD = { minX: -1.25, maxX: 1.25, minY: -0.6, maxY: 1.0 };
const VIEW_W = 1000;
const VIEW_H = 640;

function sx(x: number): number {
  return ((x - WORLD.minX) / (WORLD.maxX - WORLD.minX)) * VIEW_W;
}

function sy(y: number): number {
  // Top-down view with world +y pointing away from the viewer.
  return VIEW_H - ((y - WORLD.minY) / (WORLD.maxY - WORLD.minY)) * VIEW_H;
}

function sw(w: number): number {
  return (w / (WORLD.maxX - WORLD.minX)) * VIEW_W;
}

function sh(h: number): number {
  return (h / (WORLD.maxY - WORLD.minY)) * VIEW_H;
}

function cssColor(rgb: [number, number, number]): string {
  const [r, g, b] = rgb.map((v) => Math.round(v * 255)) as [number, number, number];
  return `rgb(${r}, ${g}, ${b})`;
}

function el(tag: string, attrs: Record<string, string>, text?: string): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function highlightClass(id: string, snapshot: SnapshotFrame): string {
  if (snapshot.attention.stack.includes(id)) return "focus";
  if (snapshot.attention.active.includes(id)) return "active";
  if (snapshot.attention.attend.includes(id)) return "attend";
  return "";
}

function drawObject(obj: WorldObject, snapshot: SnapshotFrame): SVGElement {
  const g = el("g", {
    class: `object ${highlightClass(obj.id, snapshot)}`.trim(),
    "data-id": obj.id,
  });
  const [x, y, z] = obj.position;
  const [ex, ey, ez] = obj.extent;
  g.appendChild(
    el("rect", {
      x: String(sx(x - ex / 2)),
      y: String(sy(y + ey / 2)),
      width: String(sw(ex)),
      height: String(sh(ey)),
      fill: cssColor(obj.color),
      class: "object-shape",
    }),
  );
  g.appendChild(
    el("text", {
      x: String(sx(x)),
      y: String(sy(y) - 6),
      class: "object-label",
      "text-anchor": "middle",
    }, obj.id),
  );
  const badges: string[] = [...obj.state];
  if (z - ez / 2 > 0.001) badges.push(`z=${(z - ez / 2).toFixed(2)}`);
  if (badges.length) {
    g.appendChild(
      el("text", {
        x: String(sx(x)),
        y: String(sy(y) + 14),
        class: "object-badge",
        "data-badges": badges.join(","),
        "text-anchor": "middle",
      }, badges.join(" ")),
    );
  }
  return g;
}

export function renderScene(snapshot: SnapshotFrame, container: Element): void {
  container.textContent = "";
  const svg = el("svg", {
    viewBox: `0 0 ${VIEW_W} ${VIEW_H}`,
    class: "scene",
    role: "img",
  });
  for (const loc of snapshot.world.locations) {
    const [x0, y0, , x1, y1] = loc.region;
    const g = el("g", { class: "location", "data-id": loc.name });
    g.appendChild(
      el("rect", {
        x: String(sx(x0)),
        y: String(sy(y1)),
        width: String(sw(x1 - x0)),
        height: String(sh(y1 - y0)),
        class: "location-region",
      }),
    );
    const label = loc.state.length ? `${loc.name} (${loc.state.join(", ")})` : loc.name;
    g.appendChild(
      el("text", {
        x: String(sx((x0 + x1) / 2)),
        y: String(sy(y1) + 16),
        class: "location-label",
        "text-anchor": "middle",
      }, label),
    );
    svg.appendChild(g);
  }
  for (const obj of snapshot.world.objects) {
    svg.appendChild(drawObject(obj, snapshot));
  }
  container.appendChild(svg);

  const status = document.createElement("div");
  status.className = "arm-status";
  status.textContent = snapshot.world.arm
    ? `arm: holding ${snapshot.world.arm}`
    : "arm: empty";
  status.dataset.arm = snapshot.world.arm ?? "";
  container.appendChild(status);
}

export function renderInspectors(snapshot: SnapshotFrame, container: Element): void {
  container.textContent = "";
  const sets: Array<[string, string[]]> = [
    ["stack", snapshot.attention.stack],
    ["active", snapshot.attention.active],
    ["attend", snapshot.attention.attend],
  ];
  for (const [name, ids] of sets) {
    const row = document.createElement("div");
    row.className = `inspector inspector-${name}`;
    row.dataset.set = name;
    row.dataset.ids = ids.join(",");
    row.textContent = `${name}: ${ids.length ? ids.join(", ") : "(empty)"}`;
    container.appendChild(row);
  }
  const dialog = document.createElement("div");
  dialog.className = "inspector inspector-dialog";
  dialog.dataset.ids = snapshot.dialog_stack.join(",");
  dialog.textContent = snapshot.dialog_stack.length
    ? `dialog: ${snapshot.dialog_stack.join(" > ")}`
    : "dialog: (idle)";
  container.appendChild(dialog);
}

export function render(snapshot: SnapshotFrame, root: Element): void {
  let scene = root.querySelector(".scene-pane");
  if (!scene) {
    scene = document.createElement("div");
    scene.className = "scene-pane";
    root.appendChild(scene);
  }
  let inspectors = root.querySelector(".inspector-pane");
  if (!inspectors) {
    inspectors = document.createElement("div");
    inspectors.className = "inspector-pane";
    root.appendChild(inspectors);
  }
  renderScene(snapshot, scene);
  renderInspectors(snapshot, inspectors);
}

export function appendChat(
  log: Element,
  speaker: "you" | "agent",
  text: string,
): void {
  const row = document.createElement("div");
  const isQuestion = speaker === "agent" && text.endsWith("?");
  row.className = `chat-line chat-${speaker}${isQuestion ? " chat-ask" : ""}`;
  row.textContent = `${speaker === "you" ? "You" : "Agent"}: ${text}`;
  log.appendChild(row);
  log.scrollTop = log.scrollHeight;
}

export function appendAction(log: Element, primitive: string): void {
  const row = document.createElement("div");
  row.className = "chat-line chat-action";
  row.textContent = `* ${primitive}`;
  log.appendChild(row);
}

export function showError(root: Element, detail: string): void {
  let banner = root.querySelector(".error-banner");
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    root.prepend(banner);
  }
  banner.textContent = detail;
}

export function clearError(root: Element): void {
  root.querySelector(".error-banner")?.remove();
}
