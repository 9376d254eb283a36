import { describe, expect, it } from "vitest";

import { parseCommandLine, parseServerMessage } from "../src/protocol.js";

describe("parseServerMessage", () => {
  it("accepts every known message type", () => {
    for (const type of ["snapshot", "utterance", "world_delta",
                        "quest_progress", "subgoal_notice", "error"]) {
      const parsed = parseServerMessage(JSON.stringify({ type }));
      expect(parsed?.type).toBe(type);
    }
  });

  it("returns null for garbage instead of throwing", () => {
    expect(parseServerMessage("not json at all")).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
    expect(parseServerMessage("null")).toBeNull();
    expect(parseServerMessage('{"type": "teleport"}')).toBeNull();
    expect(parseServerMessage('{"no_type": true}')).toBeNull();
  });
});

describe("parseCommandLine", () => {
  it("parses the full verb set", () => {
    expect(parseCommandLine("say hello there")).toEqual(
      { type: "say", text: "hello there" });
    expect(parseCommandLine("move north")).toEqual(
      { type: "move", dir: "north" });
    expect(parseCommandLine("mine dirt")).toEqual(
      { type: "mine", kind: "dirt" });
    expect(parseCommandLine("place cobblestone")).toEqual(
      { type: "place", kind: "cobblestone" });
    expect(parseCommandLine("attack spider")).toEqual(
      { type: "attack", kind: "spider" });
    expect(parseCommandLine("attack")).toEqual({ type: "attack" });
    expect(parseCommandLine("open")).toEqual({ type: "open" });
    expect(parseCommandLine("give Alaric diamond_sword")).toEqual(
      { type: "give", to: "Alaric", item: "diamond_sword" });
    expect(parseCommandLine("wait")).toEqual({ type: "wait" });
  });

  it("rejects junk", () => {
    expect(parseCommandLine("")).toBeNull();
    expect(parseCommandLine("say")).toBeNull();
    expect(parseCommandLine("move sideways")).toBeNull();
    expect(parseCommandLine("dance")).toBeNull();
    expect(parseCommandLine("give Alaric")).toBeNull();
  });

  it("normalizes case on verbs and keeps say text verbatim", () => {
    expect(parseCommandLine("MOVE North")).toEqual(
      { type: "move", dir: "north" });
    expect(parseCommandLine("say Mixed CASE stays")).toEqual(
      { type: "say", text: "Mixed CASE stays" });
  });
});
