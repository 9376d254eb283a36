from __future__ import annotations

import pytest

from questforge.backends import ScriptedBackend, ScriptRule
from questforge.session import SessionConfig, run_session
from questforge.walkthrough import walkthrough_commands, walkthrough_rules
from questforge.world import create_world


@pytest.fixture
def world():
    return create_world(7)


def make_walkthrough_backend() -> ScriptedBackend:
    rules = [ScriptRule(response=r["response"], pattern=r.get("pattern"))
             for r in walkthrough_rules()]
    return ScriptedBackend(rules)


def run_walkthrough(seed: int = 7):
    return run_session(SessionConfig(seed=seed), walkthrough_commands(),
                       make_walkthrough_backend())


@pytest.fixture
def walkthrough_run():
    return run_walkthrough()
