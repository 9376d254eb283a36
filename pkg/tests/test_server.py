from __future__ import annotations

import json
import time

import pytest

from questforge.server import start_server
from questforge.walkthrough import walkthrough_rules

from ws_client import WsClient


@pytest.fixture
def server(tmp_path):
    rules_path = tmp_path / "rules.jsonl"
    with open(rules_path, "w", encoding="utf-8") as handle:
        for rule in walkthrough_rules():
            handle.write(json.dumps(rule) + "\n")
        handle.write(json.dumps({"default": "Okay."}) + "\n")
    server = start_server("127.0.0.1", 0, seed=7,
                          backend_spec=f"scripted:{rules_path}",
                          debug=True, log_dir=str(tmp_path / "logs"))
    yield server
    server.shutdown()
    server.server_close()


def connect(server) -> WsClient:
    host, port = server.server_address
    return WsClient(host, port)


def test_hello_returns_snapshot(server):
    client = connect(server)
    client.send({"type": "hello"})
    snapshot = client.recv()
    assert snapshot["type"] == "snapshot"
    world = snapshot["world"]
    assert world["entities"]["player"]["position"] == [13, 4, 15]
    assert world["entities"]["elena"]["name"] == "Elena"
    assert snapshot["quest"]["completed"]["a"] is None
    client.close()


def test_say_completes_first_quest_step(server):
    client = connect(server)
    client.send({"type": "say", "text": "Hello Elena, what is going on?"})
    utterances = []
    progress = None
    for _ in range(20):
        message = client.recv()
        if message["type"] == "utterance":
            utterances.append(message)
        if message["type"] == "quest_progress":
            progress = message
            break
    assert [u["actor"] for u in utterances[:2]] == ["player", "Elena"]
    assert progress is not None and progress["completed"]["a"] is not None
    client.close()


def test_world_delta_reports_events_and_entities(server):
    client = connect(server)
    client.send({"type": "move", "dir": "east"})
    delta = client.recv_until("world_delta")
    assert delta["tick"] == 1
    assert any(e["event"] == "move" for e in delta["events"])
    entities = {e["id"]: e for e in delta["entities"]}
    assert entities["player"]["position"] == [14, 4, 15]
    client.close()


def test_mine_sends_block_change(server):
    client = connect(server)
    client.send({"type": "mine", "kind": "dirt"})
    delta = client.recv_until("world_delta")
    assert delta["blocks"] and delta["blocks"][0][3] == "air"
    assert delta["player_inventory"].get("dirt") == 1
    client.close()


def test_unknown_message_type_is_error(server):
    client = connect(server)
    client.send({"type": "teleport"})
    message = client.recv()
    assert message["type"] == "error"
    client.close()


def test_two_clients_get_independent_sessions(server):
    a, b = connect(server), connect(server)
    a.send({"type": "hello"})
    b.send({"type": "hello"})
    snap_a, snap_b = a.recv(), b.recv()
    assert snap_a["session"] != snap_b["session"]
    assert snap_a["seed"] != snap_b["seed"]
    a.send({"type": "move", "dir": "east"})
    a.recv_until("quest_progress")
    b.send({"type": "hello"})
    assert b.recv()["world"]["tick"] == 0  # untouched by client a
    a.close()
    b.close()


def test_subgoal_notice_forwarded_in_debug_mode(server):
    client = connect(server)
    seen = []
    for i in range(6):
        client.send({"type": "say", "text": f"small talk {i}"})
        while True:
            message = client.recv()
            seen.append(message["type"])
            if message["type"] == "quest_progress":
                break
    # the sixth exchange generated a sub-goal; debug mode forwards it
    assert "subgoal_notice" in seen
    client.close()


def test_disconnect_flushes_log(server, tmp_path):
    client = connect(server)
    client.send({"type": "hello"})
    client.recv()
    client.send({"type": "move", "dir": "east"})
    client.recv_until("quest_progress")
    client.close()
    log_dir = tmp_path / "logs"
    deadline = time.time() + 5
    while time.time() < deadline:
        logs = list(log_dir.glob("*.jsonl")) if log_dir.exists() else []
        if logs:
            records = [json.loads(line) for line in
                       logs[0].read_text().splitlines()]
            assert records[-1]["payload"]["event"] == "session_end"
            return
        time.sleep(0.05)
    pytest.fail("no session log flushed after disconnect")


def test_plain_http_request_gets_info(server):
    import socket
    host, port = server.server_address
    sock = socket.create_connection((host, port), timeout=5)
    sock.sendall(b"GET / HTTP/1.1\r\nHost: x\r\n\r\n")
    response = sock.recv(4096)
    assert response.startswith(b"HTTP/1.1 200")
    sock.close()
