"""The shipped end-to-end walkthrough: player script plus backend script.

Generates, from the world constants, a command sequence that finishes all
seven quest steps against the scripted provider: greet Elena, loot the
village chest, pillar up beside the island, clear each spider, meet Alaric,
fight the chest zombies, loot the sword, and hand it over.  The same lists
are shipped as JSONL data files for the CLI; a test pins file and generator
to each other.

Attack runs are deliberately over-provisioned: swinging at empty air only
costs a tick, and the extra swings absorb mob approach time.
"""

from __future__ import annotations

import json
import re
from importlib import resources

from . import constants as C

PLAYER_FILE = "walkthrough_player.jsonl"
BACKEND_FILE = "walkthrough_backend.jsonl"

GREET_ELENA = "Hello Elena, what is going on?"
ASK_MINING = "Can you mine a dirt block to show me how?"
GREET_ALARIC = "Hello Alaric, Elena sent me to help."

# Pillar beside the island's west edge, well clear of every spider's aggro
# radius, then step east onto the platform.
PILLAR_SPOT = (19, 26)
ISLAND_ENTRY_Z = 26


def _walk(x0: int, z0: int, x1: int, z1: int) -> tuple[list[dict], int, int]:
    """Axis-aligned walk commands: x leg first, then z leg."""
    commands = []
    step = 1 if x1 > x0 else -1
    for _ in range(abs(x1 - x0)):
        commands.append({"verb": "move", "dir": "east" if step > 0 else "west"})
    step = 1 if z1 > z0 else -1
    for _ in range(abs(z1 - z0)):
        commands.append({"verb": "move", "dir": "south" if step > 0 else "north"})
    return commands, x1, z1


def walkthrough_commands() -> list[dict]:
    commands: list[dict] = []
    x, z = C.PLAYER_SPAWN[0], C.PLAYER_SPAWN[2]

    commands.append({"verb": "say", "text": GREET_ELENA})
    commands.append({"verb": "say", "text": ASK_MINING})
    commands.append({"verb": "open"})  # village chest: pickaxe + 64 cobblestone

    leg, x, z = _walk(x, z, *PILLAR_SPOT)
    commands.extend(leg)
    climb = C.ISLAND_STAND_Y - C.VILLAGE_GROUND_Y
    commands.extend({"verb": "place", "kind": "cobblestone"} for _ in range(climb))
    commands.append({"verb": "move", "dir": "east"})  # onto the platform
    x += 1

    # Spider two sits on the entry row; walk in and cut it down.
    leg, x, z = _walk(x, z, C.SPIDER_SPAWNS[1][0], ISLAND_ENTRY_Z)
    commands.extend(leg)
    commands.extend({"verb": "attack", "kind": "spider"} for _ in range(8))

    # Spider one guards the east side.
    leg, x, z = _walk(x, z, C.SPIDER_SPAWNS[0][0], ISLAND_ENTRY_Z)
    commands.extend(leg)
    commands.extend({"verb": "attack", "kind": "spider"} for _ in range(8))

    # Spider three is south of Alaric; approach down his column.
    leg, x, z = _walk(x, z, C.ALARIC_POS[0], C.ALARIC_POS[2] + 1)
    commands.extend(leg)
    commands.extend({"verb": "attack", "kind": "spider"} for _ in range(8))

    commands.append({"verb": "say", "text": GREET_ALARIC})

    # The zombies converge as soon as we step toward the sword chest.
    leg, x, z = _walk(x, z, C.SWORD_CHEST_POS[0], C.ALARIC_POS[2] + 2)
    commands.extend(leg)
    commands.extend({"verb": "attack", "kind": "zombie"} for _ in range(14))

    leg, x, z = _walk(x, z, C.SWORD_CHEST_POS[0], C.SWORD_CHEST_POS[2] - 4)
    commands.extend(leg)
    commands.append({"verb": "open"})  # the special sword

    leg, x, z = _walk(x, z, C.ALARIC_POS[0] + 2, C.ALARIC_POS[2])
    commands.extend(leg)
    commands.append({"verb": "give", "to": "Alaric", "item": "diamond_sword"})
    return commands


def _ends_with(player_line: str) -> str:
    return re.escape(player_line) + "$"


def walkthrough_rules() -> list[dict]:
    return [
        {
            "pattern": _ends_with(f"Player: {GREET_ELENA}"),
            "response": (
                "Oh, thank goodness you are here! My friend Alaric is trapped on "
                "the island high above us, under siege by spiders. "
                "Function: [{'name':'pointToLocation', 'arguments': ['island']}]"
            ),
        },
        {
            "pattern": _ends_with("Function_Returns: pointed to island"),
            "response": (
                "There! I just pointed to it. Look up and you will see the island "
                "above our village. Please gather sturdy blocks and build a path "
                "up to help Alaric."
            ),
        },
        {
            "pattern": _ends_with(f"Player: {ASK_MINING}"),
            "response": (
                "Sure! First, let us find a suitable spot to gather materials. "
                "Function: [{'name':'mineBlock', 'arguments': ['dirt']}]"
            ),
        },
        {
            "pattern": _ends_with("Function_Returns: mined successfully"),
            "response": (
                "I just mined a dirt block for you. Gather cobblestones or dirt "
                "the same way, then build a staircase up to the island."
            ),
        },
        {
            "pattern": _ends_with(f"Player: {GREET_ALARIC}"),
            "response": (
                "Thank you for coming, friend! I need my special sword back. It "
                "lies in a chest on this island, guarded by zombies. Retrieve it "
                "and I will reward you with a netherite sword."
            ),
        },
    ]


def write_fixture_files(directory: str) -> tuple[str, str]:
    """Write the walkthrough player and backend scripts as JSONL files."""
    player_path = f"{directory}/{PLAYER_FILE}"
    backend_path = f"{directory}/{BACKEND_FILE}"
    with open(player_path, "w", encoding="utf-8") as handle:
        for command in walkthrough_commands():
            handle.write(json.dumps(command, sort_keys=True) + "\n")
    with open(backend_path, "w", encoding="utf-8") as handle:
        for rule in walkthrough_rules():
            handle.write(json.dumps(rule, sort_keys=True) + "\n")
    return player_path, backend_path


def shipped_player_lines() -> list[str]:
    text = resources.files("questforge").joinpath(f"data/{PLAYER_FILE}").read_text("utf-8")
    return [line for line in text.splitlines() if line.strip()]


def shipped_rule_lines() -> list[str]:
    text = resources.files("questforge").joinpath(f"data/{BACKEND_FILE}").read_text("utf-8")
    return [line for line in text.splitlines() if line.strip()]


def shipped_player_commands() -> list[dict]:
    return [json.loads(line) for line in shipped_player_lines()]
