/**
 * Canvas and DOM rendering. All state comes in as a SessionView; nothing
 * here mutates it.
 */

import { BLOCK_COLORS, Level, WORLD_SIZE, buildMapModel } from "./maplayer.js";
import { ChatLine, QUEST_STEPS, SessionView, completedSteps } from "./state.js";

export const TILE_PX = 9;

export function drawMap(canvas: HTMLCanvasElement, view: SessionView,
                        level: Level): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const model = buildMapModel(view, level);
  ctx.fillStyle = level === "island" ? "#101828" : "#15241a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  for (const [column, kind] of model.grid.tiles) {
    const [x, z] = column.split(",").map(Number);
    ctx.fillStyle = BLOCK_COLORS[kind] ?? "#444444";
    ctx.fillRect(x * TILE_PX, z * TILE_PX, TILE_PX - 1, TILE_PX - 1);
  }
  ctx.font = `${TILE_PX + 2}px monospace`;
  ctx.textBaseline = "top";
  for (const marker of model.markers) {
    ctx.fillStyle = marker.color;
    ctx.fillText(marker.glyph, marker.x * TILE_PX, marker.z * TILE_PX - 1);
  }
}

export function canvasSize(): number {
  return WORLD_SIZE * TILE_PX;
}

function transcriptHtml(lines: ChatLine[]): string {
  return lines
    .map((line) => {
      const cls = line.speaker === "you" ? "line player" : "line npc";
      return `<div class="${cls}"><b>${escapeHtml(line.speaker)}:</b> ` +
             `${escapeHtml(line.text)}</div>`;
    })
    .join("");
}

export function renderChats(container: HTMLElement, view: SessionView): void {
  for (const [npc, lines] of view.transcripts) {
    let panel = container.querySelector<HTMLElement>(`[data-npc="${npc}"]`);
    if (!panel) {
      panel = document.createElement("div");
      panel.className = "chat-panel";
      panel.dataset.npc = npc;
      panel.innerHTML = `<h3>${escapeHtml(npc)}</h3><div class="lines"></div>`;
      container.appendChild(panel);
    }
    const body = panel.querySelector<HTMLElement>(".lines");
    if (body) {
      body.innerHTML = transcriptHtml(lines);
      body.scrollTop = body.scrollHeight;
    }
  }
}

export function renderQuestStrip(container: HTMLElement, view: SessionView): void {
  const done = completedSteps(view);
  const cells = QUEST_STEPS.map(([letter, title], index) => {
    const lit = index < done ? "lit" : "";
    const failed = view.quest.terminally_failed ? "failed" : "";
    return `<div class="step ${lit} ${failed}" title="${escapeHtml(title)}">` +
           `${letter}</div>`;
  });
  container.innerHTML = cells.join("") +
    `<span class="step-count">${done}/7</span>`;
}

export function renderStatus(container: HTMLElement, view: SessionView): void {
  const player = view.entities.get("player");
  const hearts = player ? `${player.health} hp` : "";
  const items = Object.entries(view.playerInventory)
    .map(([item, count]) => `${count}× ${item}`)
    .join(", ") || "empty";
  const end = view.finished ? ` — session over (${view.endReason})` : "";
  container.innerHTML =
    `<span class="hp">${hearts}</span> · tick ${view.tick} · ` +
    `${escapeHtml(view.timeOfDay)}${end}<br><span class="inv">` +
    `inventory: ${escapeHtml(items)}</span>`;
}

export function renderNotices(container: HTMLElement, view: SessionView): void {
  const subgoals = view.subgoals
    .map((goal) => `<div class="subgoal">[Sub-goal] ${escapeHtml(goal.speaker)}: ` +
                   `${escapeHtml(goal.text)}</div>`)
    .join("");
  const notices = view.notices
    .map((text) => `<div class="notice">${escapeHtml(text)}</div>`)
    .join("");
  container.innerHTML = subgoals + notices;
  container.scrollTop = container.scrollHeight;
}

export function renderBanner(container: HTMLElement, view: SessionView): void {
  if (view.connection === "open") {
    container.className = "banner hidden";
    container.textContent = "";
  } else {
    container.className = "banner visible";
    container.textContent = view.connection === "connecting"
      ? "connecting…"
      : "connection lost — retrying…";
  }
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"']/g, (ch) => ({
    "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&#39;",
  }[ch] as string));
}
