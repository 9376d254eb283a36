"""Prompt assembly and the function-return feedback loop, step by step.

Elena's whole character lives in a layered prompt; her in-game actions are
function calls embedded in the model text; and whatever those calls return
is injected back before she speaks. A scripted provider stands in for the
model so every line below is reproducible.
"""

import re

from questforge import (
    ConversationState,
    ItemKind,
    ScriptedBackend,
    ScriptRule,
    assemble_prompt,
    create_world,
    load_shipped_profile,
    take_npc_turn,
)

state = ConversationState(load_shipped_profile("elena"))
world = create_world(7)

print("=== the system block, exactly as the provider sees it ===")
doc = assemble_prompt(state, [])
system = doc.messages[0].text
print(system[:600])
print(f"... ({len(system)} characters total)")
print()
print("note: her skills include mineBlock but no attack functions:",
      "attackEntity" in system, "<- should be False")

def ends(line, response):
    return ScriptRule(pattern=re.escape(line) + "$", response=response)

backend = ScriptedBackend([
    ends("Player: could you give me your pickaxe?",
         "Of course! Function: [{'name':'dropItem', 'arguments': ['iron_pickaxe']}]"),
    ends("Function_Returns: dropped iron_pickaxe",
         "There you go, take good care of it!"),
    ends("Function_Returns: do not have iron_pickaxe",
         "This is weird... I don't seem to have it anymore. I'm sorry!"),
])

print()
print("=== turn 1: the call succeeds ===")
outcome = take_npc_turn(state, world, "could you give me your pickaxe?", backend)
print("player> could you give me your pickaxe?")
print("calls:", [(c.name, c.arguments) for c in outcome.turn.calls])
print("returns:", [r.text for r in outcome.turn.results])
print("Elena>", outcome.reply)
print("(two provider queries made:", len(outcome.backend_exchanges), ")")

print()
print("=== turn 2: same request, but the pickaxe is gone ===")
outcome = take_npc_turn(state, world, "could you give me your pickaxe?", backend)
print("player> could you give me your pickaxe?")
print("returns:", [r.text for r in outcome.turn.results])
print("Elena>", outcome.reply)
print()
print("The failure string traveled verbatim into her follow-up prompt as")
print("'Function_Returns: do not have iron_pickaxe', which is why she can")
print("acknowledge the miss instead of pretending the handoff worked.")

print()
print("=== where the pickaxe actually went ===")
pile = {pos.as_tuple(): {k.value: v for k, v in items.items()}
        for pos, items in world.ground.items()}
print("ground items:", pile)
print("(dropItem puts it at her feet; anyone walking over picks it up)")
assert world.entity("elena").count(ItemKind.IRON_PICKAXE) == 0
