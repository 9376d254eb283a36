/**
 * Entry point: connect the WebSocket, fold messages into the view, render.
 *
 * The backend URL comes from the ?ws= query parameter, defaulting to
 * ws://localhost:8765. Reconnects re-send hello and rebuild from the fresh
 * snapshot; while disconnected the input is disabled and a banner shows.
 */

import { Level } from "./maplayer.js";
import { ClientMessage, parseCommandLine, parseServerMessage } from "./protocol.js";
import { applyMessage, initialView, SessionView } from "./state.js";
import {
  canvasSize,
  drawMap,
  renderBanner,
  renderChats,
  renderNotices,
  renderQuestStrip,
  renderStatus,
} from "./render.js";

const RECONNECT_DELAY_MS = 1500;

function wsUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("ws");
  return fromQuery ?? "ws://localhost:8765";
}

class App {
  view: SessionView = initialView();
  level: Level = "village";
  socket: WebSocket | null = null;

  private map = document.getElementById("map") as HTMLCanvasElement;
  private chats = document.getElementById("chats") as HTMLElement;
  private strip = document.getElementById("quest-strip") as HTMLElement;
  private status = document.getElementById("status") as HTMLElement;
  private notices = document.getElementById("notices") as HTMLElement;
  private banner = document.getElementById("banner") as HTMLElement;
  private input = document.getElementById("command") as HTMLInputElement;

  start(): void {
    this.map.width = canvasSize();
    this.map.height = canvasSize();
    this.wireControls();
    this.connect();
    this.render();
  }

  private wireControls(): void {
    this.input.addEventListener("keydown", (event) => {
      if (event.key !== "Enter") return;
      const command = parseCommandLine(this.input.value);
      if (command) {
        this.send(command);
        this.input.value = "";
      } else {
        this.view.notices.push("! unrecognized command (say/move/mine/place/attack/open/give/wait)");
        this.render();
      }
    });
    document.querySelectorAll<HTMLButtonElement>("[data-cmd]").forEach((button) => {
      button.addEventListener("click", () => {
        const command = parseCommandLine(button.dataset.cmd ?? "");
        if (command) this.send(command);
      });
    });
    document.querySelectorAll<HTMLButtonElement>("[data-level]").forEach((button) => {
      button.addEventListener("click", () => {
        this.level = (button.dataset.level as Level) ?? "village";
        document.querySelectorAll("[data-level]").forEach((b) =>
          b.classList.toggle("active", b === button));
        this.render();
      });
    });
  }

  private connect(): void {
    this.view.connection = "connecting";
    this.render();
    const socket = new WebSocket(wsUrl());
    this.socket = socket;
    socket.onopen = () => {
      this.view = initialView();
      this.view.connection = "open";
      socket.send(JSON.stringify({ type: "hello" }));
      this.render();
    };
    socket.onmessage = (event) => {
      const message = parseServerMessage(String(event.data));
      if (message) applyMessage(this.view, message);
      this.render();
    };
    socket.onclose = () => {
      this.view.connection = "closed";
      this.render();
      window.setTimeout(() => this.connect(), RECONNECT_DELAY_MS);
    };
    socket.onerror = () => socket.close();
  }

  private send(message: ClientMessage): void {
    if (this.socket && this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(JSON.stringify(message));
    }
  }

  private render(): void {
    drawMap(this.map, this.view, this.level);
    renderChats(this.chats, this.view);
    renderQuestStrip(this.strip, this.view);
    renderStatus(this.status, this.view);
    renderNotices(this.notices, this.view);
    renderBanner(this.banner, this.view);
    this.input.disabled = this.view.connection !== "open" || this.view.finished;
  }
}

new App().start();
