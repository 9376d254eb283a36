/**
 * Wire protocol types for the QuestForge serve endpoint.
 *
 * Every message is one JSON object per WebSocket text frame. The client
 * never computes game state itself; it only folds what the server sends.
 */

export type Vec3 = [number, number, number];

export interface EntityView {
  id: string;
  kind: string;
  name: string;
  position: Vec3;
  health: number;
  equipped: string | null;
}

export interface SnapshotEntity {
  kind: string;
  name: string;
  position: Vec3;
  health: number;
  equipped: string | null;
  inventory: Record<string, number>;
  following: boolean;
  region: string | null;
}

export interface SnapshotWorld {
  seed: number;
  tick: number;
  time_of_day: string;
  blocks: Record<string, string>;
  entities: Record<string, SnapshotEntity>;
  chests: Record<string, Record<string, number>>;
  ground: Record<string, Record<string, number>>;
}

export interface QuestState {
  completed: Record<string, number | null>;
  terminally_failed: boolean;
}

export interface SnapshotMsg {
  type: "snapshot";
  session: string;
  seed: number;
  debug: boolean;
  world: SnapshotWorld;
  quest: QuestState;
}

export interface UtteranceMsg {
  type: "utterance";
  actor: string;
  text: string;
}

export interface WorldDeltaMsg {
  type: "world_delta";
  tick: number;
  time_of_day: string;
  events: Record<string, unknown>[];
  entities: EntityView[];
  player_inventory: Record<string, number>;
  blocks: [number, number, number, string][];
  ground: [number, number, number, Record<string, number>][];
  finished: boolean;
  end_reason: string | null;
}

export interface QuestProgressMsg extends QuestState {
  type: "quest_progress";
}

export interface SubgoalNoticeMsg {
  type: "subgoal_notice";
  npc: string;
  text: string;
}

export interface ErrorMsg {
  type: "error";
  text: string;
}

export type ServerMessage =
  | SnapshotMsg
  | UtteranceMsg
  | WorldDeltaMsg
  | QuestProgressMsg
  | SubgoalNoticeMsg
  | ErrorMsg;

const SERVER_TYPES = new Set([
  "snapshot", "utterance", "world_delta", "quest_progress",
  "subgoal_notice", "error",
]);

/** Parse one frame; anything unrecognized comes back as null, never a throw. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let value: unknown;
  try {
    value = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof value !== "object" || value === null) return null;
  const type = (value as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) return null;
  return value as ServerMessage;
}

export type ClientMessage =
  | { type: "hello" }
  | { type: "say"; text: string }
  | { type: "move"; dir: string }
  | { type: "mine"; kind: string }
  | { type: "place"; kind: string }
  | { type: "attack"; kind?: string }
  | { type: "open" }
  | { type: "give"; to: string; item: string }
  | { type: "wait" };

const DIRECTIONS = new Set(["north", "south", "east", "west", "up", "down"]);

/**
 * The same line grammar the terminal client uses:
 * say <text> / move <dir> / mine <kind> / place <kind> / attack [kind] /
 * open / give <npc> <item> / wait
 */
export function parseCommandLine(line: string): ClientMessage | null {
  const words = line.trim().split(/\s+/);
  if (!words[0]) return null;
  const verb = words[0].toLowerCase();
  if (verb === "say") {
    const text = line.trim().slice(3).trim();
    return text ? { type: "say", text } : null;
  }
  if (verb === "move" && words[1] && DIRECTIONS.has(words[1].toLowerCase())) {
    return { type: "move", dir: words[1].toLowerCase() };
  }
  if (verb === "mine" && words[1]) return { type: "mine", kind: words[1].toLowerCase() };
  if (verb === "place" && words[1]) return { type: "place", kind: words[1].toLowerCase() };
  if (verb === "attack") {
    return words[1] ? { type: "attack", kind: words[1].toLowerCase() } : { type: "attack" };
  }
  if (verb === "open") return { type: "open" };
  if (verb === "give" && words[1] && words[2]) {
    return { type: "give", to: words[1], item: words[2].toLowerCase() };
  }
  if (verb === "wait") return { type: "wait" };
  return null;
}
