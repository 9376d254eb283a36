"""QuestForge: an LLM-driven NPC runtime on a deterministic grid world.

Two persona-driven NPCs help a player finish a seven-step rescue quest.
Each NPC gets a layered character prompt, a curated table of in-game
functions it may call, the success/failure string of every call fed back
before it speaks, and a steering sub-goal generated every few exchanges.
Sessions run against a built-in seeded simulator, log every event to a
replayable JSONL stream, and roll up into quest-completion funnels.
"""

from .actions import (
    FunctionCall,
    FunctionResult,
    Registry,
    alaric_registry,
    dispatch,
    elena_registry,
    format_call,
    parse_npc_output,
    render_skill_section,
)
from .backends import (
    Backend,
    BackendError,
    CompletionParams,
    PromptDocument,
    PromptMessage,
    RecordingBackend,
    RemoteBackend,
    ReplayBackend,
    ScriptedBackend,
    ScriptRule,
)
from .npc import (
    ConversationState,
    ConversationTurn,
    NpcProfile,
    assemble_prompt,
    generate_sub_goal,
    load_shipped_profile,
    take_npc_turn,
)
from .quest import FunnelReport, QuestProgress, QuestStep, funnel
from .session import (
    LogRecord,
    Session,
    SessionConfig,
    read_log,
    replay,
    replay_verify,
    run_session,
    write_log,
)
from .world import (
    ActionResult,
    BlockKind,
    Entity,
    EntityKind,
    ItemKind,
    Position,
    WorldEvent,
    WorldState,
    create_world,
)

__version__ = "0.1.0"
