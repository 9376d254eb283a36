/**
 * Client session view: a fold over server messages, nothing more.
 *
 * The server is authoritative for everything. Utterances are grouped into
 * per-NPC transcripts by pairing each player line with the NPC that answers
 * it in the same response batch; lines nobody answered land in the notices.
 */

import {
  EntityView,
  QuestState,
  ServerMessage,
  SnapshotMsg,
  WorldDeltaMsg,
} from "./protocol.js";

export interface ChatLine {
  speaker: string;
  text: string;
}

export type Connection = "connecting" | "open" | "closed";

export interface SessionView {
  connection: Connection;
  session: string | null;
  debug: boolean;
  tick: number;
  timeOfDay: string;
  blocks: Map<string, string>;
  chests: Set<string>;
  ground: Map<string, Record<string, number>>;
  entities: Map<string, EntityView>;
  playerInventory: Record<string, number>;
  transcripts: Map<string, ChatLine[]>;
  pendingPlayerLines: string[];
  notices: string[];
  subgoals: ChatLine[];
  quest: QuestState;
  finished: boolean;
  endReason: string | null;
}

export const QUEST_STEPS: [string, string][] = [
  ["a", "talk to Elena"],
  ["b", "collect materials"],
  ["c", "build path to island"],
  ["d", "fight spiders"],
  ["e", "talk to Alaric"],
  ["f", "find the sword"],
  ["g", "give sword to Alaric"],
];

const NOTICE_LIMIT = 40;

export function initialView(): SessionView {
  return {
    connection: "connecting",
    session: null,
    debug: false,
    tick: 0,
    timeOfDay: "day",
    blocks: new Map(),
    chests: new Set(),
    ground: new Map(),
    entities: new Map(),
    playerInventory: {},
    transcripts: new Map(),
    pendingPlayerLines: [],
    notices: [],
    subgoals: [],
    quest: { completed: {}, terminally_failed: false },
    finished: false,
    endReason: null,
  };
}

// The fold must survive any frame the socket hands it, so every field goes
// through a shape check before it touches the view.

function asRecord(value: unknown): Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value)
    ? (value as Record<string, unknown>)
    : {};
}

function asArray(value: unknown): unknown[] {
  return Array.isArray(value) ? value : [];
}

function asVec3(value: unknown): [number, number, number] | null {
  if (!Array.isArray(value) || value.length !== 3) return null;
  const [x, y, z] = value;
  if ([x, y, z].some((v) => typeof v !== "number" || !Number.isFinite(v))) {
    return null;
  }
  return [x, y, z];
}

function asCounts(value: unknown): Record<string, number> {
  const counts: Record<string, number> = {};
  for (const [key, raw] of Object.entries(asRecord(value))) {
    if (typeof raw === "number" && Number.isFinite(raw)) counts[key] = raw;
  }
  return counts;
}

function asEntityView(id: string, value: unknown): EntityView | null {
  const raw = asRecord(value);
  const position = asVec3(raw.position);
  if (!id || position === null) return null;
  return {
    id,
    kind: typeof raw.kind === "string" ? raw.kind : "unknown",
    name: typeof raw.name === "string" ? raw.name : id,
    position,
    health: typeof raw.health === "number" ? raw.health : 0,
    equipped: typeof raw.equipped === "string" ? raw.equipped : null,
  };
}

function asQuest(value: unknown): QuestState {
  const raw = asRecord(value);
  const completed: Record<string, number | null> = {};
  for (const [letter, stamp] of Object.entries(asRecord(raw.completed))) {
    completed[letter] = typeof stamp === "number" ? stamp : null;
  }
  return { completed, terminally_failed: Boolean(raw.terminally_failed) };
}

function applySnapshot(view: SessionView, msg: SnapshotMsg): void {
  const world = asRecord(msg.world);
  view.session = typeof msg.session === "string" ? msg.session : view.session;
  view.debug = Boolean(msg.debug);
  view.tick = typeof world.tick === "number" ? world.tick : 0;
  view.timeOfDay = typeof world.time_of_day === "string" ? world.time_of_day : "day";
  view.blocks = new Map();
  for (const [key, kind] of Object.entries(asRecord(world.blocks))) {
    if (typeof kind === "string") view.blocks.set(key, kind);
  }
  view.chests = new Set(Object.keys(asRecord(world.chests)));
  view.ground = new Map();
  for (const [key, pile] of Object.entries(asRecord(world.ground))) {
    view.ground.set(key, asCounts(pile));
  }
  view.entities = new Map();
  for (const [id, raw] of Object.entries(asRecord(world.entities))) {
    const entity = asEntityView(id, raw);
    if (!entity) continue;
    view.entities.set(id, entity);
    if (entity.kind === "npc" && !view.transcripts.has(entity.name)) {
      view.transcripts.set(entity.name, []);
    }
  }
  view.playerInventory = asCounts(asRecord(asRecord(world.entities).player).inventory);
  view.quest = asQuest(msg.quest);
}

function applyDelta(view: SessionView, msg: WorldDeltaMsg): void {
  if (typeof msg.tick === "number") view.tick = msg.tick;
  if (typeof msg.time_of_day === "string") view.timeOfDay = msg.time_of_day;
  for (const raw of asArray(msg.entities)) {
    const id = asRecord(raw).id;
    const entity = asEntityView(typeof id === "string" ? id : "", raw);
    if (entity) view.entities.set(entity.id, entity);
  }
  for (const change of asArray(msg.blocks)) {
    if (!Array.isArray(change) || change.length !== 4) continue;
    const [x, y, z, kind] = change;
    const key = `${x},${y},${z}`;
    if (kind === "air") view.blocks.delete(key);
    else if (typeof kind === "string") view.blocks.set(key, kind);
  }
  const piles = asArray(msg.ground);
  view.ground = new Map();
  for (const pile of piles) {
    if (!Array.isArray(pile) || pile.length !== 4) continue;
    const [x, y, z, items] = pile;
    view.ground.set(`${x},${y},${z}`, asCounts(items));
  }
  if (msg.player_inventory !== undefined) {
    view.playerInventory = asCounts(msg.player_inventory);
  }
  view.finished = Boolean(msg.finished);
  view.endReason = typeof msg.end_reason === "string" ? msg.end_reason : null;
}

function pushNotice(view: SessionView, text: string): void {
  view.notices.push(text);
  if (view.notices.length > NOTICE_LIMIT) {
    view.notices.splice(0, view.notices.length - NOTICE_LIMIT);
  }
}

function applyUtterance(view: SessionView, actor: string, text: string): void {
  if (actor === "player") {
    view.pendingPlayerLines.push(text);
    return;
  }
  if (actor === "system") {
    for (const line of view.pendingPlayerLines) pushNotice(view, `you: ${line}`);
    view.pendingPlayerLines = [];
    pushNotice(view, text);
    return;
  }
  const transcript = view.transcripts.get(actor) ?? [];
  for (const line of view.pendingPlayerLines) {
    transcript.push({ speaker: "you", text: line });
  }
  view.pendingPlayerLines = [];
  transcript.push({ speaker: actor, text });
  view.transcripts.set(actor, transcript);
}

/** Fold one message into the view. Unknown content must never throw. */
export function applyMessage(view: SessionView, msg: ServerMessage): SessionView {
  switch (msg.type) {
    case "snapshot":
      applySnapshot(view, msg);
      break;
    case "utterance":
      applyUtterance(view, String(msg.actor ?? "?"), String(msg.text ?? ""));
      break;
    case "world_delta":
      applyDelta(view, msg);
      break;
    case "quest_progress":
      view.quest = asQuest(msg);
      break;
    case "subgoal_notice":
      view.subgoals.push({ speaker: String(msg.npc ?? "?"), text: String(msg.text ?? "") });
      break;
    case "error":
      pushNotice(view, `! ${String(msg.text ?? "")}`);
      break;
  }
  return view;
}

/** Number of completed quest steps, for the progress strip. */
export function completedSteps(view: SessionView): number {
  return QUEST_STEPS.filter(([letter]) =>
    view.quest.completed[letter] !== null &&
    view.quest.completed[letter] !== undefined).length;
}
