import { beforeEach, describe, expect, it } from "vitest";

import type { SnapshotFrame } from "../src/protocol.js";
import {
  appendChat, clearError, render, showError,
} from "../src/render.js";

function snapshot(overrides: Partial<SnapshotFrame> = {}): SnapshotFrame {
  return {
    type: "snapshot",
    world: {
      objects: [
        {
          id: "red-cyl",
          position: [-0.2, 0.3, 0.1],
          extent: [0.1, 0.1, 0.2],
          color: [1, 0, 0],
          size: 1.0,
          shape: [1, 0, 0, 0],
          state: [],
        },
        {
          id: "steak",
          position: [0.9, 0.35, 0.075],
          extent: [0.15, 0.1, 0.05],
          color: [0.45, 0.25, 0.1],
          size: 0.2,
          shape: [0.5, 0, 0.5, 0.3],
          state: ["cooked"],
        },
      ],
      locations: [
        { name: "table", region: [-0.6, 0.15, -0.02, 0.6, 0.75, 0], state: [] },
        { name: "pantry", region: [-1.1, 0.1, 0, -0.7, 0.6, 0.4],
          state: ["closed"] },
        { name: "garbage", region: [-1.1, -0.5, 0, -0.7, 0, 0.4],
          state: ["open"] },
        { name: "stove", region: [0.7, 0.1, 0, 1.1, 0.6, 0.05],
          state: ["closed", "off"] },
      ],
      arm: null,
      clock: 3,
    },
    attention: { stack: ["red-cyl"], active: ["steak"], attend: ["red-cyl", "steak"] },
    dialog_stack: ["execute-task(pick)"],
    ...overrides,
  };
}

describe("render", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="root"></div>';
    root = document.getElementById("root") as HTMLElement;
  });

  it("draws one shape per object and location", () => {
    render(snapshot(), root);
    expect(root.querySelectorAll("g.object")).toHaveLength(2);
    expect(root.querySelectorAll("g.location")).toHaveLength(4);
  });

  it("colors objects from the color feature and labels them", () => {
    render(snapshot(), root);
    const shape = root.querySelector(
      'g.object[data-id="red-cyl"] .object-shape',
    ) as SVGElement;
    expect(shape.getAttribute("fill")).toBe("rgb(255, 0, 0)");
    const labels = [...root.querySelectorAll(".object-label")].map(
      (n) => n.textContent,
    );
    expect(labels).toContain("red-cyl");
  });

  it("marks focus and active highlights from the received sets", () => {
    render(snapshot(), root);
    expect(
      root.querySelector('g.object[data-id="red-cyl"]')?.classList.contains("focus"),
    ).toBe(true);
    expect(
      root.querySelector('g.object[data-id="steak"]')?.classList.contains("active"),
    ).toBe(true);
  });

  it("shows state badges such as cooked", () => {
    render(snapshot(), root);
    const badge = root.querySelector(
      'g.object[data-id="steak"] .object-badge',
    ) as SVGElement;
    expect(badge.getAttribute("data-badges")).toContain("cooked");
  });

  it("shows a stacking badge for lifted objects", () => {
    const snap = snapshot();
    snap.world.objects[0]!.position = [0, 0.45, 0.5];
    render(snap, root);
    const badge = root.querySelector(
      'g.object[data-id="red-cyl"] .object-badge',
    ) as SVGElement;
    expect(badge.getAttribute("data-badges")).toMatch(/z=/);
  });

  it("reports the attention sets and dialog stack verbatim", () => {
    render(snapshot(), root);
    const stack = root.querySelector('.inspector[data-set="stack"]') as HTMLElement;
    expect(stack.dataset.ids).toBe("red-cyl");
    const dialog = root.querySelector(".inspector-dialog") as HTMLElement;
    expect(dialog.textContent).toContain("execute-task(pick)");
  });

  it("re-rendering replaces the scene instead of stacking copies", () => {
    render(snapshot(), root);
    render(snapshot(), root);
    expect(root.querySelectorAll("svg.scene")).toHaveLength(1);
  });

  it("error banner appears and clears", () => {
    showError(root, "malformed frame");
    expect(root.querySelector(".error-banner")?.textContent).toBe(
      "malformed frame",
    );
    clearError(root);
    expect(root.querySelector(".error-banner")).toBeNull();
  });

  it("chat highlights agent questions", () => {
    const log = document.createElement("div");
    appendChat(log, "agent", "Which object?");
    appendChat(log, "you", "the blue one.");
    expect(log.querySelectorAll(".chat-ask")).toHaveLength(1);
  });
});
