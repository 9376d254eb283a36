"""WebSocket session endpoint for the browser client.

One connection equals one independent session with its own world, seeded as
``base seed + connection index`` so concurrent clients never share state, and
served on its own thread so one session's backend latency never blocks
another.  Every message, in both directions, is a single JSON object per
WebSocket text frame:

client to server::

    {"type": "hello"}
    {"type": "say", "text": ...}      {"type": "move", "dir": ...}
    {"type": "mine", "kind": ...}     {"type": "place", "kind": ...}
    {"type": "attack", "kind"?: ...}  {"type": "open"}
    {"type": "give", "to": ..., "item": ...}   {"type": "wait"}

server to client::

    {"type": "snapshot", ...}         full world + quest state
    {"type": "utterance", ...}        player/NPC/system speech
    {"type": "world_delta", ...}      events, entities, changed blocks
    {"type": "quest_progress", ...}   step completion map
    {"type": "subgoal_notice", ...}   only when serving with --debug
    {"type": "error", ...}            in-game failures and bad input

The WebSocket layer itself is a minimal RFC 6455 implementation (handshake,
masked client frames, text/ping/close opcodes); plain HTTP requests get a
short info response.

On disconnect the session log is flushed to ``<log_dir>/<session_id>.jsonl``.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
import socket
import socketserver
import struct
import sys
import threading

from .session import LogRecord, Session, SessionConfig, write_log

WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

OP_CONT = 0x0
OP_TEXT = 0x1
OP_CLOSE = 0x8
OP_PING = 0x9
OP_PONG = 0xA

CLIENT_VERBS = ("say", "move", "mine", "place", "attack", "open", "give", "wait")


class SocketClosed(Exception):
    pass


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = b""
    while len(chunks) < n:
        piece = sock.recv(n - len(chunks))
        if not piece:
            raise SocketClosed
        chunks += piece
    return chunks


def accept_key(client_key: str) -> str:
    digest = hashlib.sha1((client_key + WS_GUID).encode("ascii")).digest()
    return base64.b64encode(digest).decode("ascii")


def read_frame(sock: socket.socket) -> tuple[int, bytes]:
    """Read one frame; returns (opcode, payload).  Client payloads are masked."""
    head = _recv_exact(sock, 2)
    opcode = head[0] & 0x0F
    masked = bool(head[1] & 0x80)
    length = head[1] & 0x7F
    if length == 126:
        length = struct.unpack(">H", _recv_exact(sock, 2))[0]
    elif length == 127:
        length = struct.unpack(">Q", _recv_exact(sock, 8))[0]
    mask = _recv_exact(sock, 4) if masked else b""
    payload = _recv_exact(sock, length) if length else b""
    if masked:
        payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
    return opcode, payload


def write_frame(sock: socket.socket, payload: bytes, opcode: int = OP_TEXT) -> None:
    head = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        head += bytes([n])
    elif n < 1 << 16:
        head += bytes([126]) + struct.pack(">H", n)
    else:
        head += bytes([127]) + struct.pack(">Q", n)
    sock.sendall(head + payload)


def read_message(sock: socket.socket) -> str | None:
    """Next text message, transparently answering pings; None on close."""
    buffered = b""
    while True:
        opcode, payload = read_frame(sock)
        if opcode == OP_CLOSE:
            try:
                write_frame(sock, payload[:2], OP_CLOSE)
            except OSError:
                pass
            return None
        if opcode == OP_PING:
            write_frame(sock, payload, OP_PONG)
            continue
        if opcode == OP_PONG:
            continue
        if opcode in (OP_TEXT, OP_CONT):
            buffered += payload
            if opcode == OP_TEXT or buffered:
                return buffered.decode("utf-8")


def _entity_views(session: Session) -> list[dict]:
    views = []
    for entity in session.world.entities.values():
        views.append({
            "id": entity.id,
            "kind": entity.kind.value,
            "name": entity.name,
            "position": list(entity.position.as_tuple()),
            "health": entity.health,
            "equipped": entity.equipped.value if entity.equipped else None,
        })
    return views


def _ground_views(session: Session) -> list[list]:
    return [
        [pos.x, pos.y, pos.z, {item.value: count for item, count in pile.items()}]
        for pos, pile in session.world.ground.items()
    ]


def snapshot_message(session: Session, debug: bool) -> dict:
    return {
        "type": "snapshot",
        "session": session.config.session_id,
        "seed": session.config.seed,
        "debug": debug,
        "world": session.world.to_canonical_dict(),
        "quest": session.progress.to_payload(),
    }


def messages_for_records(session: Session, records: list[LogRecord],
                         debug: bool) -> list[dict]:
    """Translate the records one command produced into wire messages."""
    messages: list[dict] = []
    events: list[dict] = []
    block_changes: list[list] = []
    for record in records:
        if record.kind == "utterance":
            messages.append({"type": "utterance", "actor": record.actor,
                             "text": record.payload["text"]})
        elif record.kind == "warning":
            messages.append({"type": "error", "text": record.payload["text"]})
        elif record.kind == "subgoal" and debug:
            messages.append({"type": "subgoal_notice", "npc": record.actor,
                             "text": record.payload["text"]})
        elif record.kind == "world_event":
            payload = record.payload
            if payload.get("event") in ("session_start", "player_command"):
                continue
            events.append(payload)
            if payload["event"] == "mine":
                x, y, z = payload["position"]
                block_changes.append([x, y, z, "air"])
            elif payload["event"] == "place":
                x, y, z = payload["position"]
                block_changes.append([x, y, z, payload["item"]])
    messages.append({
        "type": "world_delta",
        "tick": session.world.tick,
        "time_of_day": session.world.time_of_day,
        "events": events,
        "entities": _entity_views(session),
        "player_inventory": {item.value: count for item, count
                             in session.world.player.inventory.items()},
        "blocks": block_changes,
        "ground": _ground_views(session),
        "finished": session.finished,
        "end_reason": session.end_reason,
    })
    messages.append({"type": "quest_progress", **session.progress.to_payload()})
    return messages


class QuestForgeServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, seed: int, backend_spec: str, debug: bool,
                 log_dir: str):
        super().__init__(address, _Handler)
        self.base_seed = seed
        self.backend_spec = backend_spec
        self.debug = debug
        self.log_dir = log_dir
        self._counter = 0
        self._counter_lock = threading.Lock()

    def next_session(self) -> tuple[int, str]:
        with self._counter_lock:
            index = self._counter
            self._counter += 1
        seed = self.base_seed + index
        return seed, f"ws-{seed}-{index}"


class _Handler(socketserver.BaseRequestHandler):
    server: QuestForgeServer

    def handle(self) -> None:
        try:
            request = self._read_http_head()
        except (SocketClosed, OSError):
            return
        headers = {k.lower(): v for k, v in request["headers"].items()}
        if headers.get("upgrade", "").lower() != "websocket":
            body = b"QuestForge serve endpoint; connect with a WebSocket client.\n"
            self.request.sendall(
                b"HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\n"
                + f"Content-Length: {len(body)}\r\n\r\n".encode() + body)
            return
        key = headers.get("sec-websocket-key", "")
        self.request.sendall(
            ("HTTP/1.1 101 Switching Protocols\r\n"
             "Upgrade: websocket\r\nConnection: Upgrade\r\n"
             f"Sec-WebSocket-Accept: {accept_key(key)}\r\n\r\n").encode())
        self._run_session()

    def _read_http_head(self) -> dict:
        data = b""
        while b"\r\n\r\n" not in data:
            piece = self.request.recv(4096)
            if not piece:
                raise SocketClosed
            data += piece
        head = data.split(b"\r\n\r\n", 1)[0].decode("utf-8", "replace")
        lines = head.split("\r\n")
        headers = {}
        for line in lines[1:]:
            if ":" in line:
                name, value = line.split(":", 1)
                headers[name.strip()] = value.strip()
        return {"request_line": lines[0], "headers": headers}

    def _run_session(self) -> None:
        from .cli import build_backend

        seed, session_id = self.server.next_session()
        config = SessionConfig(seed=seed, session_id=session_id)
        session = Session(config, build_backend(self.server.backend_spec))
        try:
            while True:
                try:
                    raw = read_message(self.request)
                except (SocketClosed, OSError):
                    break
                if raw is None:
                    break
                for message in self._respond(session, raw):
                    write_frame(self.request,
                                json.dumps(message, sort_keys=True).encode("utf-8"))
        finally:
            self._flush_log(session)

    def _respond(self, session: Session, raw: str) -> list[dict]:
        try:
            message = json.loads(raw)
        except json.JSONDecodeError:
            return [{"type": "error", "text": "message is not valid JSON"}]
        if not isinstance(message, dict):
            return [{"type": "error", "text": "message must be a JSON object"}]
        kind = message.get("type")
        if kind == "hello":
            return [snapshot_message(session, self.server.debug)]
        if kind not in CLIENT_VERBS:
            return [{"type": "error", "text": f"unknown message type {kind!r}"}]
        command = dict(message)
        command["verb"] = command.pop("type")
        records = session.handle_command(command)
        return messages_for_records(session, records, self.server.debug)

    def _flush_log(self, session: Session) -> None:
        if not session.finished:
            session._finish("client_disconnected")
        os.makedirs(self.server.log_dir, exist_ok=True)
        path = os.path.join(self.server.log_dir,
                            f"{session.config.session_id}.jsonl")
        write_log(session.records, path)


def start_server(host: str, port: int, seed: int, backend_spec: str,
                 debug: bool, log_dir: str) -> QuestForgeServer:
    server = QuestForgeServer((host, port), seed=seed, backend_spec=backend_spec,
                              debug=debug, log_dir=log_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def serve_forever(host: str, port: int, seed: int, backend_spec: str,
                  debug: bool, log_dir: str) -> int:
    try:
        server = QuestForgeServer((host, port), seed=seed,
                                  backend_spec=backend_spec, debug=debug,
                                  log_dir=log_dir)
    except OSError as exc:
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 1
    address = server.server_address
    print(f"questforge serve listening on ws://{address[0]}:{address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
    return 0
