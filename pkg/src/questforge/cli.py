"""Operator entry point: play, run, funnel, replay, serve.

Exit codes are stable for scripting: 0 success, 1 runtime error, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from .backends import Backend, RemoteBackend, ScriptedBackend
from .quest import funnel as compute_funnel
from .session import (
    ReplayLogError,
    Session,
    SessionConfig,
    read_log,
    replay,
    replay_verify,
    run_session,
    write_log,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def build_backend(spec: str) -> Backend:
    if spec == "remote":
        return RemoteBackend()
    if spec.startswith("scripted:"):
        return ScriptedBackend.from_jsonl(spec.split(":", 1)[1])
    raise ValueError(f"unknown backend {spec!r}; use remote or scripted:<file>")


def _session_config(args: argparse.Namespace) -> SessionConfig:
    return SessionConfig(seed=args.seed, k=args.k,
                         turn_budget=args.turn_budget,
                         tick_budget=args.tick_budget)


def _add_session_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--backend", default="remote",
                        help="remote or scripted:<rules.jsonl>")
    parser.add_argument("--k", type=int, default=6,
                        help="exchanges between sub-goal generations")
    parser.add_argument("--turn-budget", type=int, default=200)
    parser.add_argument("--tick-budget", type=int, default=5000)
    parser.add_argument("--log", default=None, help="write the session log here")


HELP_TEXT = """commands:
  say <text>            talk to the nearest NPC
  move <dir> [n]        north/south/east/west/up/down
  mine <block>          mine the nearest block of that kind
  place <item>          place a block at your feet and step up
  attack [kind]         hit the nearest mob (optionally spider/zombie/creeper)
  open                  open the nearest chest and take its contents
  give <npc> <item>     hand an item over
  wait                  let a tick pass
  quit                  end the session"""


def parse_player_line(line: str) -> dict | None:
    parts = line.strip().split()
    if not parts:
        return None
    verb = parts[0].lower()
    if verb == "say":
        return {"verb": "say", "text": line.strip()[4:].strip()}
    if verb == "move" and len(parts) >= 2:
        return {"verb": "move", "dir": parts[1].lower()}
    if verb == "mine" and len(parts) >= 2:
        return {"verb": "mine", "kind": parts[1].lower()}
    if verb == "place" and len(parts) >= 2:
        return {"verb": "place", "kind": parts[1].lower()}
    if verb == "attack":
        return ({"verb": "attack", "kind": parts[1].lower()}
                if len(parts) >= 2 else {"verb": "attack"})
    if verb == "open":
        return {"verb": "open"}
    if verb == "give" and len(parts) >= 3:
        return {"verb": "give", "to": parts[1], "item": parts[2].lower()}
    if verb == "wait":
        return {"verb": "wait"}
    return None


def cmd_play(args: argparse.Namespace) -> int:
    backend = build_backend(args.backend)
    session = Session(_session_config(args), backend)
    print("QuestForge. Type 'help' for commands; 'quit' to leave.")
    while not session.finished:
        try:
            line = input("> ")
        except EOFError:
            break
        stripped = line.strip().lower()
        if stripped in ("quit", "exit"):
            break
        if stripped == "help":
            print(HELP_TEXT)
            continue
        command = parse_player_line(line)
        if command is None:
            print("unrecognized command; type 'help'")
            continue
        repeat = 1
        parts = line.split()
        if command["verb"] == "move" and len(parts) >= 3 and parts[2].isdigit():
            repeat = int(parts[2])
        for _ in range(repeat):
            for record in session.handle_command(command):
                if record.kind == "utterance":
                    print(f"[{record.actor}] {record.payload['text']}")
                elif record.kind == "quest_step":
                    print(f"*** quest step ({record.payload['step']}) complete: "
                          f"{record.payload['title']} ***")
                elif record.kind == "warning":
                    print(f"! {record.payload['text']}")
            if session.finished:
                break
    if not session.finished:
        session._finish("player_source_exhausted")
    print(f"session over: {session.end_reason}")
    if args.log:
        write_log(session.records, args.log)
        print(f"log written to {args.log}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    backend = build_backend(args.backend)
    commands = []
    with open(args.player, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                commands.append(json.loads(line))
    records, progress = run_session(_session_config(args), commands, backend)
    if args.log:
        write_log(records, args.log)
    done = sum(1 for tick in progress.to_payload()["completed"].values()
               if tick is not None)
    print(f"session {records[0].session}: {done}/7 quest steps, "
          f"{len(records)} records")
    return EXIT_OK


def cmd_funnel(args: argparse.Namespace) -> int:
    logs = []
    for path in args.logs:
        with open(path, encoding="utf-8") as handle:
            logs.append([json.loads(line) for line in handle if line.strip()])
    report = compute_funnel(logs, warn=lambda msg: print(f"warning: {msg}",
                                                         file=sys.stderr))
    if args.json:
        print(report.to_json())
    else:
        print(report.render_table())
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    records = read_log(args.log)
    if args.verify:
        if replay_verify(records):
            print("replay verified: log is bit-exact")
            return EXIT_OK
        print("replay mismatch: regenerated log differs", file=sys.stderr)
        return EXIT_RUNTIME
    world, progress, _ = replay(records)
    print(json.dumps({"tick": world.tick,
                      "quest": progress.to_payload()}, sort_keys=True))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve_forever
    return serve_forever(host=args.host, port=args.port, seed=args.seed,
                         backend_spec=args.backend, debug=args.debug,
                         log_dir=args.log_dir)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="questforge")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    play = sub.add_parser("play", help="interactive terminal session")
    _add_session_flags(play)
    play.set_defaults(func=cmd_play)

    run = sub.add_parser("run", help="scripted, non-interactive session")
    _add_session_flags(run)
    run.add_argument("--player", required=True,
                     help="JSONL file of player commands")
    run.set_defaults(func=cmd_run)

    fun = sub.add_parser("funnel", help="quest-completion funnel over logs")
    fun.add_argument("logs", nargs="+")
    fun.add_argument("--json", action="store_true")
    fun.set_defaults(func=cmd_funnel)

    rep = sub.add_parser("replay", help="reconstruct a session from its log")
    rep.add_argument("log")
    rep.add_argument("--verify", action="store_true",
                     help="exit 0 only if the log replays bit-exactly")
    rep.set_defaults(func=cmd_replay)

    srv = sub.add_parser("serve", help="host the web-UI session endpoint")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8765)
    srv.add_argument("--seed", type=int, default=7)
    srv.add_argument("--backend", default="remote")
    srv.add_argument("--debug", action="store_true",
                     help="also forward [Sub-goal] notices to clients")
    srv.add_argument("--log-dir", default="logs")
    srv.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (OSError, ValueError, ReplayLogError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
