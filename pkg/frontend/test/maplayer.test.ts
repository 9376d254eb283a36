import { describe, expect, it } from "vitest";

import {
  buildMapModel,
  chestMarkers,
  entityMarkers,
  projectBlocks,
} from "../src/maplayer.js";
import { applyMessage, initialView } from "../src/state.js";
import { sampleSnapshot } from "./state.test.js";

function snapshotView() {
  const view = initialView();
  applyMessage(view, sampleSnapshot());
  return view;
}

describe("projectBlocks", () => {
  it("village level shows the house footprint, not the island", () => {
    const { tiles } = projectBlocks(snapshotView().blocks, "village");
    expect(tiles.get("12,9")).toBe("oak_log");       // house corner
    expect(tiles.get("13,9")).toBe("cobblestone");   // house wall
    expect(tiles.has("30,30")).toBe(false);          // island stone filtered out
  });

  it("island level shows only high blocks", () => {
    const { tiles } = projectBlocks(snapshotView().blocks, "island");
    expect(tiles.get("30,30")).toBe("stone");
    expect(tiles.has("12,9")).toBe(false);
  });

  it("keeps the topmost block per column", () => {
    const blocks = new Map([
      ["5,2,5", "stone"],
      ["5,4,5", "oak_log"],
      ["5,3,5", "dirt"],
    ]);
    expect(projectBlocks(blocks, "village").tiles.get("5,5")).toBe("oak_log");
  });
});

describe("markers", () => {
  it("island level shows the chest and the zombie", () => {
    const view = snapshotView();
    const model = buildMapModel(view, "island");
    const labels = model.markers.map((marker) => marker.label);
    expect(labels).toContain("chest");
    expect(labels).toContain("Zombie 1");
    expect(labels).toContain("Alaric");
    expect(labels).not.toContain("Elena"); // she is on the village level
  });

  it("npc markers use the first letter of the name", () => {
    const view = snapshotView();
    const markers = entityMarkers(view.entities.values(), "village");
    const elena = markers.find((marker) => marker.label === "Elena");
    expect(elena?.glyph).toBe("E");
  });

  it("dead mobs drop off the map after a death delta", () => {
    const view = snapshotView();
    let markers = entityMarkers(view.entities.values(), "island");
    expect(markers.some((marker) => marker.label === "Zombie 1")).toBe(true);

    applyMessage(view, {
      type: "world_delta", tick: 2, time_of_day: "day",
      events: [{ event: "death", target: "zombie-1" }],
      entities: [{ id: "zombie-1", kind: "zombie", name: "Zombie 1",
                   position: [40, 31, 41], health: 0, equipped: null }],
      player_inventory: {}, blocks: [], ground: [],
      finished: false, end_reason: null,
    });
    markers = entityMarkers(view.entities.values(), "island");
    expect(markers.some((marker) => marker.label === "Zombie 1")).toBe(false);
  });

  it("chest markers split by level", () => {
    const view = snapshotView();
    expect(chestMarkers(view.chests, "village")).toHaveLength(1);
    expect(chestMarkers(view.chests, "island")).toHaveLength(1);
  });
});
