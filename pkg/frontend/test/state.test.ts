import { describe, expect, it } from "vitest";

import { buildMapModel } from "../src/maplayer.js";
import { ServerMessage, SnapshotMsg, WorldDeltaMsg } from "../src/protocol.js";
import {
  applyMessage,
  completedSteps,
  initialView,
  SessionView,
} from "../src/state.js";

export function sampleSnapshot(): SnapshotMsg {
  return {
    type: "snapshot",
    session: "ws-7-0",
    seed: 7,
    debug: false,
    world: {
      seed: 7,
      tick: 0,
      time_of_day: "day",
      blocks: {
        "12,4,9": "oak_log", "13,4,9": "cobblestone", "14,4,9": "cobblestone",
        "10,3,10": "dirt", "10,2,10": "stone",
        "30,30,30": "stone", "31,30,30": "stone",
      },
      entities: {
        player: { kind: "player", name: "Player", position: [13, 4, 15],
                  health: 20, equipped: null, inventory: { dirt: 3 },
                  following: false, region: null },
        elena: { kind: "npc", name: "Elena", position: [15, 4, 15],
                 health: 20, equipped: null,
                 inventory: { iron_pickaxe: 1, splash_potion: 1 },
                 following: false, region: "village" },
        alaric: { kind: "npc", name: "Alaric", position: [32, 31, 32],
                  health: 20, equipped: null, inventory: { stick: 4 },
                  following: false, region: "island" },
        "zombie-1": { kind: "zombie", name: "Zombie 1", position: [40, 31, 41],
                      health: 12, equipped: null, inventory: {},
                      following: false, region: null },
      },
      chests: { "16,4,15": { stone_pickaxe: 1, cobblestone: 64 },
                "41,31,41": { diamond_sword: 1 } },
      ground: {},
    },
    quest: { completed: { a: null, b: null, c: null, d: null, e: null,
                          f: null, g: null },
             terminally_failed: false },
  };
}

function delta(partial: Partial<WorldDeltaMsg>): WorldDeltaMsg {
  return {
    type: "world_delta", tick: 1, time_of_day: "day", events: [],
    entities: [], player_inventory: {}, blocks: [], ground: [],
    finished: false, end_reason: null, ...partial,
  };
}

function freshView(): SessionView {
  const view = initialView();
  applyMessage(view, sampleSnapshot());
  return view;
}

describe("snapshot fold", () => {
  it("loads blocks, entities, chests, quest", () => {
    const view = freshView();
    expect(view.session).toBe("ws-7-0");
    expect(view.blocks.get("12,4,9")).toBe("oak_log");
    expect(view.entities.get("player")?.position).toEqual([13, 4, 15]);
    expect(view.chests.has("41,31,41")).toBe(true);
    expect(view.playerInventory).toEqual({ dirt: 3 });
    expect(completedSteps(view)).toBe(0);
  });

  it("creates one transcript panel per NPC", () => {
    const view = freshView();
    expect([...view.transcripts.keys()].sort()).toEqual(["Alaric", "Elena"]);
  });
});

describe("utterance pairing", () => {
  it("pairs a player line with the NPC that answers it", () => {
    const view = freshView();
    applyMessage(view, { type: "utterance", actor: "player", text: "hello" });
    applyMessage(view, { type: "utterance", actor: "Elena", text: "hi!" });
    expect(view.transcripts.get("Elena")).toEqual([
      { speaker: "you", text: "hello" },
      { speaker: "Elena", text: "hi!" },
    ]);
    expect(view.transcripts.get("Alaric")).toEqual([]);
  });

  it("routes unanswered lines to the notices", () => {
    const view = freshView();
    applyMessage(view, { type: "utterance", actor: "player", text: "anyone?" });
    applyMessage(view, { type: "utterance", actor: "system",
                         text: "no one can hear you" });
    expect(view.notices).toContain("you: anyone?");
    expect(view.notices).toContain("no one can hear you");
  });
});

describe("world_delta fold", () => {
  it("updates entity positions wholesale", () => {
    const view = freshView();
    applyMessage(view, delta({
      tick: 5,
      entities: [{ id: "player", kind: "player", name: "Player",
                   position: [14, 4, 15], health: 18, equipped: null }],
    }));
    expect(view.tick).toBe(5);
    expect(view.entities.get("player")?.position).toEqual([14, 4, 15]);
    expect(view.entities.get("elena")?.position).toEqual([15, 4, 15]);
  });

  it("applies block changes (mine clears, place sets)", () => {
    const view = freshView();
    applyMessage(view, delta({ blocks: [[10, 3, 10, "air"], [9, 4, 9, "cobblestone"]] }));
    expect(view.blocks.has("10,3,10")).toBe(false);
    expect(view.blocks.get("9,4,9")).toBe("cobblestone");
  });

  it("tracks inventory and session end", () => {
    const view = freshView();
    applyMessage(view, delta({ player_inventory: { cobblestone: 64 },
                               finished: true, end_reason: "quest_complete" }));
    expect(view.playerInventory).toEqual({ cobblestone: 64 });
    expect(view.finished).toBe(true);
    expect(view.endReason).toBe("quest_complete");
  });
});

describe("quest progress strip", () => {
  it("lights steps as they complete", () => {
    const view = freshView();
    applyMessage(view, { type: "quest_progress",
                         completed: { a: 3, b: 6, c: null, d: null, e: null,
                                      f: null, g: null },
                         terminally_failed: false });
    expect(completedSteps(view)).toBe(2);
  });
});

describe("subgoals and errors", () => {
  it("collects subgoal notices and error lines", () => {
    const view = freshView();
    applyMessage(view, { type: "subgoal_notice", npc: "Elena",
                         text: "Keep the player on task." });
    applyMessage(view, { type: "error", text: "no chest nearby" });
    expect(view.subgoals[0]).toEqual(
      { speaker: "Elena", text: "Keep the player on task." });
    expect(view.notices.at(-1)).toBe("! no chest nearby");
  });
});

// deterministic PRNG so the fuzz corpus is reproducible
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("fuzz: any message sequence folds without throwing", () => {
  it("survives 3000 random messages", () => {
    const rand = mulberry32(20240601);
    const types = ["snapshot", "utterance", "world_delta", "quest_progress",
                   "subgoal_notice", "error"] as const;
    const junkValues: unknown[] = [
      undefined, null, 0, -1, 3.5, "", "text", [], {}, { x: 1 },
      [1, 2, 3], true, false, NaN,
    ];
    const pick = <T>(items: readonly T[]): T =>
      items[Math.floor(rand() * items.length)];

    const view = freshView();
    for (let i = 0; i < 3000; i++) {
      const message: Record<string, unknown> = { type: pick(types) };
      const fieldPool = ["actor", "text", "tick", "entities", "blocks",
                         "ground", "player_inventory", "completed", "npc",
                         "world", "quest", "session", "finished", "events",
                         "time_of_day", "end_reason", "terminally_failed"];
      const fieldCount = Math.floor(rand() * 6);
      for (let f = 0; f < fieldCount; f++) {
        message[pick(fieldPool)] = pick(junkValues);
      }
      if (message.type === "snapshot" && rand() < 0.5) {
        Object.assign(message, sampleSnapshot());
      }
      expect(() => {
        applyMessage(view, message as unknown as ServerMessage);
        // the view must stay renderable, not merely foldable
        buildMapModel(view, "village");
        buildMapModel(view, "island");
        completedSteps(view);
      }).not.toThrow();
    }
  });
});
