import { describe, expect, it } from "vitest";

import {
  parseInbound, pointFrame, resetFrame, utteranceFrame, validateOutbound,
} from "../src/protocol.js";

describe("outbound frames", () => {
  it("builds schema-exact frames", () => {
    expect(utteranceFrame("pick it up.")).toEqual({
      type: "utterance",
      text: "pick it up.",
    });
    expect(pointFrame("red-cyl")).toEqual({
      type: "point",
      object_id: "red-cyl",
    });
    expect(resetFrame("two-object")).toEqual({
      type: "reset",
      scenario: "two-object",
    });
  });

  it("validates field presence", () => {
    expect(() => validateOutbound({ type: "utterance", text: "  " })).toThrow();
    expect(() =>
      validateOutbound({ type: "point", object_id: "" } as never),
    ).toThrow();
    expect(() =>
      validateOutbound({ type: "bogus" } as never),
    ).toThrow();
  });

  it("rejects extra fields", () => {
    const frame = { type: "utterance", text: "hi.", extra: 1 };
    expect(() => validateOutbound(frame as never)).toThrow();
  });
});

describe("inbound frames", () => {
  it("parses the four server frame kinds", () => {
    expect(parseInbound('{"type": "say", "text": "Which object?"}')).toEqual({
      type: "say",
      text: "Which object?",
    });
    expect(
      parseInbound('{"type": "action", "primitive": "pickUp(red-cyl)"}'),
    ).toEqual({ type: "action", primitive: "pickUp(red-cyl)" });
    expect(parseInbound('{"type": "error", "detail": "boom"}')).toEqual({
      type: "error",
      detail: "boom",
    });
    const snapshot = {
      type: "snapshot",
      world: { objects: [], locations: [], arm: null, clock: 0 },
      attention: { stack: [], active: [], attend: [] },
      dialog_stack: [],
    };
    expect(parseInbound(JSON.stringify(snapshot))).toEqual(snapshot);
  });

  it("returns null for malformed frames", () => {
    expect(parseInbound("{not json")).toBeNull();
    expect(parseInbound('{"type": "say"}')).toBeNull();
    expect(parseInbound('{"type": "snapshot", "world": {}}')).toBeNull();
    expect(parseInbound('"just a string"')).toBeNull();
  });
});
