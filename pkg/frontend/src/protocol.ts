/**
 * Wire protocol shared with the session service (see server.py).
 * JSON text frames over one WebSocket per session; field names are fixed.
 */

export interface UtteranceFrame {
  type: "utterance";
  text: string;
}

export interface PointFrame {
  type: "point";
  object_id: string;
}

export interface ResetFrame {
  type: "reset";
  scenario: string;
}

export type OutboundFrame = UtteranceFrame | PointFrame | ResetFrame;

export interface WorldObject {
  id: string;
  position: [number, number, number];
  extent: [number, number, number];
  color: [number, number, number];
  size: number;
  shape: number[];
  state: string[];
}

export interface WorldLocation {
  name: string;
  region: [number, number, number, number, number, number];
  state: string[];
}

export interface WorldSnapshot {
  objects: WorldObject[];
  locations: WorldLocation[];
  arm: string | null;
  clock: number;
}

export interface AttentionSets {
  stack: string[];
  active: string[];
  attend: string[];
}

export interface SnapshotFrame {
  type: "snapshot";
  world: WorldSnapshot;
  attention: AttentionSets;
  dialog_stack: string[];
}

export interface SayFrame {
  type: "say";
  text: string;
}

export interface ActionFrame {
  type: "action";
  primitive: string;
}

export interface ErrorFrame {
  type: "error";
  detail: string;
}

export type InboundFrame = SnapshotFrame | SayFrame | ActionFrame | ErrorFrame;

export function utteranceFrame(text: string): UtteranceFrame {
  return { type: "utterance", text };
}

export function pointFrame(objectId: string): PointFrame {
  return { type: "point", object_id: objectId };
}

export function resetFrame(scenario: string): ResetFrame {
  return { type: "reset", scenario };
}

/** Throws unless the frame matches the outbound schema exactly. */
export function validateOutbound(frame: OutboundFrame): OutboundFrame {
  const keys = Object.keys(frame).sort();
  switch (frame.type) {
    case "utterance":
      if (typeof frame.text !== "string" || !frame.text.trim()) {
        throw new Error("utterance frame needs non-empty text");
      }
      if (keys.join(",") !== "text,type") throw new Error("extra fields");
      return frame;
    case "point":
      if (typeof frame.object_id !== "string" || !frame.object_id) {
        throw new Error("point frame needs object_id");
      }
      if (keys.join(",") !== "object_id,type") throw new Error("extra fields");
      return frame;
    case "reset":
      if (typeof frame.scenario !== "string" || !frame.scenario) {
        throw new Error("reset frame needs scenario");
      }
      if (keys.join(",") !== "scenario,type") throw new Error("extra fields");
      return frame;
    default:
      throw new Error(`unknown outbound type ${(frame as { type: string }).type}`);
  }
}

/** Parses a raw message; returns null for frames that do not fit the schema. */
export function parseInbound(raw: string): InboundFrame | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const frame = data as Record<string, unknown>;
  switch (frame.type) {
    case "say":
      return typeof frame.text === "string" ? (frame as unknown as SayFrame) : null;
    case "action":
      return typeof frame.primitive === "string"
        ? (frame as unknown as ActionFrame)
        : null;
    case "error":
      return typeof frame.detail === "string"
        ? (frame as unknown as ErrorFrame)
        : null;
    case "snapshot": {
      const world = frame.world as Record<string, unknown> | undefined;
      const attention = frame.attention as Record<string, unknown> | undefined;
      if (
        !world ||
        !Array.isArray(world.objects) ||
        !Array.isArray(world.locations) ||
        !attention ||
        !Array.isArray(attention.stack) ||
        !Array.isArray(attention.active) ||
        !Array.isArray(attention.attend) ||
        !Array.isArray(frame.dialog_stack)
      ) {
        return null;
      }
      return frame as unknown as SnapshotFrame;
    }
    default:
      return null;
  }
}
