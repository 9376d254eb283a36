/**
 * Top-down tile projection of the block grid, one level at a time.
 *
 * The quest world is vertical: a village at ground level and an island
 * platform high above it. Rather than 3-D, the map offers a level toggle;
 * each level shows, per (x, z) column, the topmost block in that level's
 * y-range, plus entity/chest/ground markers on the same level.
 */

import { EntityView } from "./protocol.js";
import { SessionView } from "./state.js";

export type Level = "village" | "island";

/** Island region starts at this y; everything below renders on the village level. */
export const ISLAND_MIN_Y = 29;

export const WORLD_SIZE = 64;

export const BLOCK_COLORS: Record<string, string> = {
  dirt: "#8a6a3d",
  stone: "#8c8c8c",
  cobblestone: "#5f6670",
  oak_log: "#5d4223",
  bedrock: "#1f1f1f",
};

export interface TileGrid {
  /** column key "x,z" -> block kind of the topmost block on this level */
  tiles: Map<string, string>;
}

export interface Marker {
  x: number;
  z: number;
  glyph: string;
  color: string;
  label: string;
}

function onLevel(y: number, level: Level): boolean {
  return level === "island" ? y >= ISLAND_MIN_Y : y < ISLAND_MIN_Y;
}

export function projectBlocks(blocks: Map<string, string>, level: Level): TileGrid {
  const tiles = new Map<string, string>();
  const tops = new Map<string, number>();
  for (const [key, kind] of blocks) {
    const [x, y, z] = key.split(",").map(Number);
    if (!onLevel(y, level)) continue;
    const column = `${x},${z}`;
    const best = tops.get(column);
    if (best === undefined || y > best) {
      tops.set(column, y);
      tiles.set(column, kind);
    }
  }
  return { tiles };
}

const ENTITY_STYLE: Record<string, { glyph: string; color: string }> = {
  player: { glyph: "@", color: "#ffd75f" },
  npc: { glyph: "N", color: "#7fd4ff" },
  spider: { glyph: "s", color: "#d45c5c" },
  zombie: { glyph: "z", color: "#6cbf6c" },
  creeper: { glyph: "c", color: "#3bd23b" },
};

/** Living entities on the level; the dead drop off the map. */
export function entityMarkers(entities: Iterable<EntityView>, level: Level): Marker[] {
  const markers: Marker[] = [];
  for (const entity of entities) {
    const [x, y, z] = entity.position;
    if (!onLevel(y, level) || entity.health <= 0) continue;
    const style = ENTITY_STYLE[entity.kind] ?? { glyph: "?", color: "#ffffff" };
    const glyph = entity.kind === "npc" ? entity.name[0] : style.glyph;
    markers.push({ x, z, glyph, color: style.color, label: entity.name });
  }
  return markers;
}

export function chestMarkers(chests: Iterable<string>, level: Level): Marker[] {
  const markers: Marker[] = [];
  for (const key of chests) {
    const [x, y, z] = key.split(",").map(Number);
    if (!onLevel(y, level)) continue;
    markers.push({ x, z, glyph: "▣", color: "#d8a63f", label: "chest" });
  }
  return markers;
}

export function groundMarkers(ground: Iterable<string>, level: Level): Marker[] {
  const markers: Marker[] = [];
  for (const key of ground) {
    const [x, y, z] = key.split(",").map(Number);
    if (!onLevel(y, level)) continue;
    markers.push({ x, z, glyph: "•", color: "#e8e2c8", label: "items" });
  }
  return markers;
}

export interface MapModel {
  grid: TileGrid;
  markers: Marker[];
}

/** Everything the renderer needs for one level of the current view. */
export function buildMapModel(view: SessionView, level: Level): MapModel {
  const grid = projectBlocks(view.blocks, level);
  const markers = [
    ...chestMarkers(view.chests, level),
    ...groundMarkers(view.ground.keys(), level),
    ...entityMarkers(view.entities.values(), level),
  ];
  return { grid, markers };
}
