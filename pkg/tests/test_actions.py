from __future__ import annotations

import random

import pytest

from questforge.actions import (
    FunctionCall,
    alaric_registry,
    build_registry,
    dispatch,
    elena_registry,
    format_call,
    parse_npc_output,
    render_skill_section,
)
from questforge.world import create_world


# --- registries ---------------------------------------------------------------

def test_elena_registry_contents():
    assert elena_registry().names() == (
        "goToPlayer", "followPlayer", "pointToLocation", "equipItem",
        "dropItem", "mineBlock",
    )


def test_alaric_registry_contents():
    names = alaric_registry().names()
    assert "pointToLocation" not in names
    assert "defendSelf" in names and "attackEntity" in names
    assert set(elena_registry().names()) - {"pointToLocation"} <= set(names)


def test_duplicate_function_rejected():
    with pytest.raises(ValueError):
        build_registry("X", ["mineBlock", "mineBlock"])


def test_unknown_function_rejected():
    with pytest.raises(ValueError):
        build_registry("X", ["castFireball"])


# --- parsing -------------------------------------------------------------------

def test_parse_single_quoted_block():
    parsed = parse_npc_output(
        "Sure! Function: [{'name':'mineBlock', 'arguments': ['oak_log']}]")
    assert parsed.speech == "Sure!"
    assert parsed.calls == [FunctionCall("mineBlock", ("oak_log",))]
    assert parsed.warnings == []


def test_parse_double_quoted_block():
    parsed = parse_npc_output(
        'Okay. Function: [{"name": "dropItem", "arguments": ["iron_pickaxe"]}]')
    assert parsed.calls == [FunctionCall("dropItem", ("iron_pickaxe",))]


def test_parse_plain_text_no_block():
    parsed = parse_npc_output("Just words, nothing else.")
    assert parsed.speech == "Just words, nothing else."
    assert parsed.calls == [] and parsed.warnings == []


def test_parse_multiple_calls_in_one_block():
    parsed = parse_npc_output(
        "On it. Function: [{'name':'equipItem', 'arguments': ['iron_pickaxe']}, "
        "{'name':'mineBlock', 'arguments': ['dirt']}]")
    assert [c.name for c in parsed.calls] == ["equipItem", "mineBlock"]


def test_parse_two_separate_blocks():
    parsed = parse_npc_output(
        "A Function: [{'name':'followPlayer', 'arguments': []}] then "
        "Function: [{'name':'goToPlayer', 'arguments': []}] done")
    assert [c.name for c in parsed.calls] == ["followPlayer", "goToPlayer"]
    assert parsed.speech == "A  then  done"


def test_malformed_block_keeps_speech():
    parsed = parse_npc_output("Hello there. Function: [{'name':'mineBlock', ]")
    assert parsed.speech.startswith("Hello there.")
    assert parsed.calls == []
    assert parsed.warnings


def test_zero_arity_formats_and_parses():
    raw = format_call(FunctionCall("defendSelf"))
    assert raw == "Function: [{'name':'defendSelf', 'arguments': []}]"
    parsed = parse_npc_output(raw)
    assert parsed.calls == [FunctionCall("defendSelf")]


def test_round_trip_exhaustive_over_registries():
    for registry in (elena_registry(), alaric_registry()):
        for spec in registry.specs:
            if spec.arity == 0:
                combos = [()]
            else:
                combos = [(value,) for value in sorted(spec.arg_domains[0])]
            for args in combos:
                call = FunctionCall(spec.name, args)
                parsed = parse_npc_output(format_call(call))
                assert parsed.calls == [call]
                assert parsed.speech == ""
                assert parsed.warnings == []


def test_parse_never_raises_on_mutations():
    rng = random.Random(99)
    base = "Okay! Function: [{'name':'mineBlock', 'arguments': ['dirt']}]"
    for _ in range(300):
        raw = list(base)
        for _ in range(rng.randrange(1, 6)):
            op = rng.randrange(3)
            pos = rng.randrange(len(raw))
            if op == 0:
                raw[pos] = chr(rng.randrange(32, 127))
            elif op == 1:
                del raw[pos]
            else:
                raw.insert(pos, chr(rng.randrange(32, 127)))
        parse_npc_output("".join(raw))  # must not raise


# --- dispatch -----------------------------------------------------------------

def test_persona_gating_blocks_elena_attack(world):
    before = world.to_canonical_json()
    result = dispatch(elena_registry(), world, "elena",
                      FunctionCall("attackEntity", ("spider",)))
    assert not result.ok
    assert result.text == "unknown function attackEntity"
    assert world.to_canonical_json() == before


def test_alaric_can_drop_netherite_sword(world):
    result = dispatch(alaric_registry(), world, "alaric",
                      FunctionCall("dropItem", ("netherite_sword",)))
    assert result.ok and result.text == "dropped netherite_sword"


def test_elena_drop_absent_item(world):
    world.entity("elena").remove_item
    dispatch(elena_registry(), world, "elena",
             FunctionCall("dropItem", ("iron_pickaxe",)))
    result = dispatch(elena_registry(), world, "elena",
                      FunctionCall("dropItem", ("iron_pickaxe",)))
    assert not result.ok and result.text == "do not have iron_pickaxe"


def test_invalid_arguments_leave_world_unchanged(world):
    before = world.to_canonical_json()
    for call in (FunctionCall("mineBlock", ("bedrock",)),
                 FunctionCall("mineBlock", ()),
                 FunctionCall("pointToLocation", ("castle",)),
                 FunctionCall("dropItem", ("iron_pickaxe", "extra"))):
        result = dispatch(elena_registry(), world, "elena", call)
        assert not result.ok and result.text == "invalid arguments"
    assert world.to_canonical_json() == before


def test_dispatch_valid_call_mutates(world):
    result = dispatch(alaric_registry(), world, "alaric",
                      FunctionCall("mineBlock", ("stone",)))
    assert result.ok and result.text == "mined successfully"


# --- skill section -------------------------------------------------------------

def test_elena_skill_section_contents():
    text = render_skill_section(elena_registry())
    assert text.startswith("You can talk to the player directly.")
    assert "mineBlock" in text and "pointToLocation" in text
    assert "attackEntity" not in text and "defendSelf" not in text


def test_alaric_skill_section_contents():
    text = render_skill_section(alaric_registry())
    assert "defendSelf" in text and "attackEntity" in text
    assert "pointToLocation" not in text


def test_empty_registry_skill_section():
    empty = build_registry("Nobody", [])
    assert render_skill_section(empty) == "You can talk to the player directly."


def test_skill_section_deterministic():
    assert render_skill_section(elena_registry()) == render_skill_section(elena_registry())
