"""Deterministic, seeded grid-world simulator.

Models the quest stage: a village with houses and chests, a floating island
high above it, two NPCs (Elena in the village, Alaric on the island), hostile
mobs, and the in-game actions NPCs and the player can take.  Everything is
tick-based and fully deterministic for a given (seed, input sequence), so
sessions can be replayed bit-exactly and tested without any live services.

Mutations happen only through the single serialized command stream of a
session (one writer per world); snapshots via :meth:`WorldState.to_canonical_json`
are safe to share.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum

from . import constants as C


class BlockKind(str, Enum):
    AIR = "air"
    DIRT = "dirt"
    COBBLESTONE = "cobblestone"
    STONE = "stone"
    OAK_LOG = "oak_log"
    BEDROCK = "bedrock"


# Only these may be mined; bedrock is immutable, air is nothing.
MINEABLE_BLOCKS = frozenset(
    {BlockKind.DIRT, BlockKind.COBBLESTONE, BlockKind.STONE, BlockKind.OAK_LOG}
)


class ItemKind(str, Enum):
    DIRT = "dirt"
    COBBLESTONE = "cobblestone"
    STONE = "stone"
    OAK_LOG = "oak_log"
    WHEAT_SEEDS = "wheat_seeds"
    SPLASH_POTION = "splash_potion"
    IRON_PICKAXE = "iron_pickaxe"
    STONE_PICKAXE = "stone_pickaxe"
    IRON_SWORD = "iron_sword"
    DIAMOND_SWORD = "diamond_sword"
    NETHERITE_SWORD = "netherite_sword"
    STICK = "stick"
    BED = "bed"


# Items that can be placed as path blocks (mirror the mineable block kinds).
PLACEABLE_ITEMS = frozenset(
    {ItemKind.DIRT, ItemKind.COBBLESTONE, ItemKind.STONE, ItemKind.OAK_LOG}
)

_ITEM_TO_BLOCK = {
    ItemKind.DIRT: BlockKind.DIRT,
    ItemKind.COBBLESTONE: BlockKind.COBBLESTONE,
    ItemKind.STONE: BlockKind.STONE,
    ItemKind.OAK_LOG: BlockKind.OAK_LOG,
}


class EntityKind(str, Enum):
    PLAYER = "player"
    NPC = "npc"
    SPIDER = "spider"
    ZOMBIE = "zombie"
    CREEPER = "creeper"


MOB_KINDS = frozenset({EntityKind.SPIDER, EntityKind.ZOMBIE, EntityKind.CREEPER})

LOCATION_NAMES = ("village", "island")


@dataclass(frozen=True)
class Position:
    x: int
    y: int
    z: int

    def manhattan(self, other: "Position") -> int:
        return abs(self.x - other.x) + abs(self.y - other.y) + abs(self.z - other.z)

    def shifted(self, dx: int = 0, dy: int = 0, dz: int = 0) -> "Position":
        return Position(self.x + dx, self.y + dy, self.z + dz)

    def key(self) -> str:
        return f"{self.x},{self.y},{self.z}"

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.x, self.y, self.z)


def in_bounds(pos: Position) -> bool:
    return 0 <= pos.x < C.WORLD_W and 0 <= pos.y < C.WORLD_H and 0 <= pos.z < C.WORLD_D


def in_island_region(pos: Position) -> bool:
    return (
        C.ISLAND_MIN_X <= pos.x < C.ISLAND_MIN_X + C.ISLAND_SIZE
        and C.ISLAND_MIN_Z <= pos.z < C.ISLAND_MIN_Z + C.ISLAND_SIZE
        and pos.y >= C.ISLAND_REGION_MIN_Y
    )


def in_village_region(pos: Position) -> bool:
    return in_bounds(pos) and pos.y < C.ISLAND_REGION_MIN_Y


_REGION_CHECKS = {"village": in_village_region, "island": in_island_region}


@dataclass
class Entity:
    id: str
    kind: EntityKind
    name: str
    position: Position
    health: int
    equipped: ItemKind | None = None
    inventory: dict[ItemKind, int] = field(default_factory=dict)
    following: bool = False
    # NPCs never leave their home region ("village" / "island").
    region: str | None = None

    @property
    def alive(self) -> bool:
        return self.health > 0

    def count(self, item: ItemKind) -> int:
        return self.inventory.get(item, 0)

    def add_item(self, item: ItemKind, count: int = 1) -> None:
        self.inventory[item] = self.inventory.get(item, 0) + count

    def remove_item(self, item: ItemKind, count: int = 1) -> None:
        have = self.inventory.get(item, 0)
        if have < count:
            raise ValueError(f"{self.id} lacks {count}x {item.value}")
        if have == count:
            del self.inventory[item]
            if self.equipped is item:
                self.equipped = None
        else:
            self.inventory[item] = have - count


@dataclass
class WorldEvent:
    """One observable world happening; the session log and quest tracker feed on these."""

    tick: int
    kind: str
    actor: str | None = None
    target: str | None = None
    item: str | None = None
    count: int | None = None
    position: tuple[int, int, int] | None = None
    amount: int | None = None
    entity_kind: str | None = None
    source: str | None = None
    text: str | None = None

    def to_payload(self) -> dict:
        payload: dict = {"event": self.kind}
        for key in ("actor", "target", "item", "count", "position", "amount",
                    "entity_kind", "source", "text"):
            value = getattr(self, key)
            if value is not None:
                payload[key] = list(value) if key == "position" else value
        return payload


@dataclass(frozen=True)
class ActionResult:
    """Success flag plus the exact return string surfaced to the model."""

    ok: bool
    text: str


class WorldState:
    """The whole mutable simulation: blocks, entities, chests, ground items, clock."""

    def __init__(self, seed: int):
        self.seed = seed
        self.tick = 0
        self.time_of_day = "day"
        self._next_time_flip = C.DAY_LENGTH_TICKS
        self.rng = random.Random(seed)
        # Sparse block storage; absent key means air.
        self.blocks: dict[tuple[int, int, int], BlockKind] = {}
        self.entities: dict[str, Entity] = {}
        self.chests: dict[Position, dict[ItemKind, int]] = {}
        self.ground: dict[Position, dict[ItemKind, int]] = {}
        self._events: list[WorldEvent] = []
        self._build_terrain()
        self._spawn_entities()
        self._stock_chests()

    # --- construction -------------------------------------------------------

    def _build_terrain(self) -> None:
        for x in range(C.WORLD_W):
            for z in range(C.WORLD_D):
                self.blocks[(x, 0, z)] = BlockKind.BEDROCK
                self.blocks[(x, 1, z)] = BlockKind.STONE
                self.blocks[(x, 2, z)] = BlockKind.STONE
                self.blocks[(x, 3, z)] = BlockKind.DIRT
        for x0, z0, x1, z1 in C.HOUSE_FOOTPRINTS:
            self._build_house(x0, z0, x1, z1)
        for x, z in C.TREE_SPOTS:
            height = self.rng.randint(C.TREE_MIN_HEIGHT, C.TREE_MAX_HEIGHT)
            for dy in range(height):
                self.blocks[(x, C.VILLAGE_GROUND_Y + dy, z)] = BlockKind.OAK_LOG
        for x, z in self.rng.sample(C.BOULDER_CANDIDATES, C.BOULDER_COUNT):
            self.blocks[(x, C.VILLAGE_GROUND_Y, z)] = BlockKind.COBBLESTONE
        for x in range(C.ISLAND_MIN_X, C.ISLAND_MIN_X + C.ISLAND_SIZE):
            for z in range(C.ISLAND_MIN_Z, C.ISLAND_MIN_Z + C.ISLAND_SIZE):
                self.blocks[(x, C.ISLAND_FLOOR_Y, z)] = BlockKind.STONE

    def _build_house(self, x0: int, z0: int, x1: int, z1: int) -> None:
        door_x = (x0 + x1) // 2
        for y in range(C.VILLAGE_GROUND_Y, C.VILLAGE_GROUND_Y + C.HOUSE_WALL_HEIGHT):
            for x in range(x0, x1 + 1):
                for z in range(z0, z1 + 1):
                    on_wall = x in (x0, x1) or z in (z0, z1)
                    if not on_wall:
                        continue
                    if x == door_x and z == z1 and y < C.VILLAGE_GROUND_Y + 2:
                        continue  # door gap, two blocks tall
                    corner = x in (x0, x1) and z in (z0, z1)
                    self.blocks[(x, y, z)] = (
                        BlockKind.OAK_LOG if corner else BlockKind.COBBLESTONE
                    )

    def _spawn_entities(self) -> None:
        def spawn(entity: Entity) -> None:
            self.entities[entity.id] = entity
            self._emit(WorldEvent(
                tick=self.tick, kind="spawn", actor=entity.id,
                position=entity.position.as_tuple(),
                entity_kind=entity.kind.value, text=entity.name,
            ))

        spawn(Entity("player", EntityKind.PLAYER, "Player",
                     Position(*C.PLAYER_SPAWN), C.PLAYER_HEALTH))
        spawn(Entity("elena", EntityKind.NPC, "Elena", Position(*C.ELENA_POS),
                     C.NPC_HEALTH, region="village",
                     inventory={ItemKind.IRON_PICKAXE: 1, ItemKind.SPLASH_POTION: 1}))
        spawn(Entity("alaric", EntityKind.NPC, "Alaric", Position(*C.ALARIC_POS),
                     C.NPC_HEALTH, region="island",
                     inventory={ItemKind.IRON_SWORD: 1, ItemKind.STICK: 4,
                                ItemKind.NETHERITE_SWORD: 1}))
        for i, pos in enumerate(C.SPIDER_SPAWNS, start=1):
            spawn(Entity(f"spider-{i}", EntityKind.SPIDER, f"Spider {i}",
                         Position(*pos), C.SPIDER_HEALTH))
        for i, pos in enumerate(C.ZOMBIE_SPAWNS, start=1):
            spawn(Entity(f"zombie-{i}", EntityKind.ZOMBIE, f"Zombie {i}",
                         Position(*pos), C.ZOMBIE_HEALTH))

    def _stock_chests(self) -> None:
        # Insertion order is the order queryChest reports contents in.
        self.chests[Position(*C.VILLAGE_CHEST_POS)] = {
            ItemKind.STONE_PICKAXE: 1, ItemKind.COBBLESTONE: 64,
        }
        self.chests[Position(*C.HOUSE_CHEST_POS)] = {
            ItemKind.BED: 1, ItemKind.WHEAT_SEEDS: 2,
        }
        self.chests[Position(*C.ISLAND_CHEST_POS)] = {
            ItemKind.STICK: 2, ItemKind.IRON_PICKAXE: 1,
        }
        self.chests[Position(*C.SWORD_CHEST_POS)] = {
            ItemKind.DIAMOND_SWORD: 1,
        }

    # --- event plumbing -----------------------------------------------------

    def _emit(self, event: WorldEvent) -> None:
        self._events.append(event)

    def drain_events(self) -> list[WorldEvent]:
        """Hand over and clear all buffered events (the authoritative stream)."""
        events, self._events = self._events, []
        return events

    # --- lookups ------------------------------------------------------------

    def entity(self, entity_id: str) -> Entity:
        return self.entities[entity_id]

    def find_by_name(self, name: str) -> Entity | None:
        lowered = name.lower()
        for entity in self.entities.values():
            if entity.name.lower() == lowered:
                return entity
        return None

    @property
    def player(self) -> Entity:
        return self.entities["player"]

    def npcs(self) -> list[Entity]:
        return [e for e in self.entities.values() if e.kind is EntityKind.NPC]

    def mobs(self) -> list[Entity]:
        return [e for e in self.entities.values() if e.kind in MOB_KINDS]

    def block_at(self, pos: Position) -> BlockKind:
        return self.blocks.get(pos.as_tuple(), BlockKind.AIR)

    def is_passable(self, pos: Position) -> bool:
        return in_bounds(pos) and self.block_at(pos) is BlockKind.AIR

    # --- clock --------------------------------------------------------------

    def advance_tick(self) -> list[WorldEvent]:
        """Advance time one tick: followers walk, mobs act, clock rolls.

        Returns the events emitted during this call; the same events stay in
        the buffer for :meth:`drain_events`.
        """
        before = len(self._events)
        self.tick += 1
        player = self.player
        for npc in sorted(self.npcs(), key=lambda e: e.id):
            if npc.alive and npc.following and player.alive:
                if npc.position.manhattan(player.position) > C.GOTO_STOP_RANGE:
                    self._step_toward(npc, player.position)
        for mob in sorted(self.mobs(), key=lambda e: e.id):
            if not mob.alive:
                continue
            target = self._nearest_victim(mob)
            if target is None:
                continue
            if mob.position.manhattan(target.position) <= C.MOB_ATTACK_RANGE:
                self._damage(mob, target, C.MOB_DAMAGE)
            else:
                self._step_toward(mob, target.position)
        if self.tick >= self._next_time_flip:
            self.time_of_day = "night" if self.time_of_day == "day" else "day"
            self._next_time_flip += C.DAY_LENGTH_TICKS
            self._emit(WorldEvent(tick=self.tick, kind="time", text=self.time_of_day))
        return self._events[before:]

    def _nearest_victim(self, mob: Entity) -> Entity | None:
        candidates = [
            e for e in self.entities.values()
            if e.alive and e.kind in (EntityKind.PLAYER, EntityKind.NPC)
            and mob.position.manhattan(e.position) <= C.AGGRO_RADIUS
        ]
        if not candidates:
            return None
        return min(candidates, key=lambda e: (mob.position.manhattan(e.position), e.id))

    # --- movement -----------------------------------------------------------

    def _step_toward(self, entity: Entity, goal: Position) -> bool:
        """One greedy Manhattan-descent step; ties break x before y before z."""
        deltas = (
            (goal.x - entity.position.x, (1, 0, 0)),
            (goal.y - entity.position.y, (0, 1, 0)),
            (goal.z - entity.position.z, (0, 0, 1)),
        )
        for delta, axis in deltas:
            if delta == 0:
                continue
            sign = 1 if delta > 0 else -1
            candidate = entity.position.shifted(*(sign * a for a in axis))
            if not self.is_passable(candidate):
                continue
            if entity.region and not _REGION_CHECKS[entity.region](candidate):
                continue
            self._move_entity(entity, candidate)
            return True
        return False

    def _move_entity(self, entity: Entity, dest: Position) -> None:
        entity.position = dest
        self._emit(WorldEvent(tick=self.tick, kind="move", actor=entity.id,
                              position=dest.as_tuple()))
        self._pickup_ground(entity)

    def _pickup_ground(self, entity: Entity) -> None:
        pile = self.ground.pop(entity.position, None)
        if not pile:
            return
        for item, count in pile.items():
            entity.add_item(item, count)
            self._emit(WorldEvent(tick=self.tick, kind="pickup", actor=entity.id,
                                  item=item.value, count=count, source="ground",
                                  position=entity.position.as_tuple()))

    # --- combat -------------------------------------------------------------

    def _damage(self, attacker: Entity | None, victim: Entity, amount: int) -> None:
        victim.health = max(0, victim.health - amount)
        self._emit(WorldEvent(
            tick=self.tick, kind="damage",
            actor=attacker.id if attacker else None,
            target=victim.id, amount=amount,
        ))
        if not victim.alive:
            self._emit(WorldEvent(
                tick=self.tick, kind="death", target=victim.id,
                entity_kind=victim.kind.value,
                position=victim.position.as_tuple(),
            ))

    # --- NPC/player actions -------------------------------------------------

    def _check_actor(self, actor_id: str) -> tuple[Entity | None, ActionResult | None]:
        actor = self.entities.get(actor_id)
        if actor is None:
            return None, ActionResult(False, f"no such entity {actor_id}")
        if not actor.alive:
            return None, ActionResult(False, "cannot act while dead")
        return actor, None

    def mine_block(self, actor_id: str, kind: BlockKind) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        if kind not in MINEABLE_BLOCKS:
            return ActionResult(False, f"cannot mine {kind.value}")
        target = self._nearest_block(actor.position, kind, C.MINE_RANGE)
        if target is None:
            return ActionResult(False, f"no {kind.value} nearby")
        del self.blocks[target.as_tuple()]
        actor.add_item(ItemKind(kind.value))
        self._emit(WorldEvent(tick=self.tick, kind="mine", actor=actor.id,
                              item=kind.value, count=1, position=target.as_tuple()))
        return ActionResult(True, "mined successfully")

    def _nearest_block(self, origin: Position, kind: BlockKind,
                       radius: int) -> Position | None:
        best: tuple[int, int, int, int] | None = None
        best_pos: Position | None = None
        for (x, y, z), block in self.blocks.items():
            if block is not kind:
                continue
            dist = abs(x - origin.x) + abs(y - origin.y) + abs(z - origin.z)
            if dist > radius:
                continue
            rank = (dist, x, y, z)
            if best is None or rank < best:
                best, best_pos = rank, Position(x, y, z)
        return best_pos

    def drop_item(self, actor_id: str, item: ItemKind) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        if actor.count(item) < 1:
            return ActionResult(False, f"do not have {item.value}")
        actor.remove_item(item)
        pile = self.ground.setdefault(actor.position, {})
        pile[item] = pile.get(item, 0) + 1
        self._emit(WorldEvent(tick=self.tick, kind="drop", actor=actor.id,
                              item=item.value, count=1,
                              position=actor.position.as_tuple()))
        return ActionResult(True, f"dropped {item.value}")

    def go_to_player(self, actor_id: str) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        player = self.player
        for _ in range(C.GOTO_TICK_LIMIT):
            if actor.position.manhattan(player.position) <= C.GOTO_STOP_RANGE:
                return ActionResult(True, "reached the player")
            self._step_toward(actor, player.position)
            self.advance_tick()
            if not actor.alive:
                return ActionResult(False, "could not reach player")
        if actor.position.manhattan(player.position) <= C.GOTO_STOP_RANGE:
            return ActionResult(True, "reached the player")
        return ActionResult(False, "could not reach player")

    def follow_player(self, actor_id: str) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        actor.following = True
        return ActionResult(True, "following the player")

    def point_to_location(self, actor_id: str, name: str) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        if name not in LOCATION_NAMES:
            return ActionResult(False, f"unknown location {name}")
        self._emit(WorldEvent(tick=self.tick, kind="point", actor=actor.id, text=name))
        return ActionResult(True, f"pointed to {name}")

    def equip_item(self, actor_id: str, item: ItemKind) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        if actor.count(item) < 1:
            return ActionResult(False, f"do not have {item.value}")
        actor.equipped = item
        self._emit(WorldEvent(tick=self.tick, kind="equip", actor=actor.id,
                              item=item.value))
        return ActionResult(True, f"equipped {item.value}")

    def attack_entity(self, actor_id: str, kind: EntityKind | None) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        mobs = [
            m for m in self.mobs()
            if m.alive and (kind is None or m.kind is kind)
            and actor.position.manhattan(m.position) <= C.ATTACK_RANGE
        ]
        if not mobs:
            label = kind.value if kind else "mobs"
            return ActionResult(False, f"no {label} nearby")
        victim = min(mobs, key=lambda m: (actor.position.manhattan(m.position), m.id))
        self._damage(actor, victim, C.ATTACK_DAMAGE)
        return ActionResult(True, f"attacked {victim.kind.value}")

    def defend_self(self, actor_id: str) -> ActionResult:
        return self.attack_entity(actor_id, None)

    def transfer_item(self, from_id: str, to_id: str, item: ItemKind) -> ActionResult:
        actor, err = self._check_actor(from_id)
        if err:
            return err
        recipient = self.entities.get(to_id)
        if recipient is None or not recipient.alive:
            return ActionResult(False, f"no one named {to_id} nearby")
        if actor.position.manhattan(recipient.position) > C.TRANSFER_RANGE:
            return ActionResult(False, "too far away")
        if actor.count(item) < 1:
            return ActionResult(False, f"do not have {item.value}")
        actor.remove_item(item)
        recipient.add_item(item)
        self._emit(WorldEvent(tick=self.tick, kind="transfer", actor=actor.id,
                              target=recipient.id, item=item.value, count=1))
        return ActionResult(True, f"gave {item.value} to {recipient.name}")

    def _nearest_chest(self, origin: Position) -> Position | None:
        best: tuple[int, int, int, int] | None = None
        best_pos: Position | None = None
        for pos in self.chests:
            dist = origin.manhattan(pos)
            if dist > C.CHEST_RANGE:
                continue
            rank = (dist, pos.x, pos.y, pos.z)
            if best is None or rank < best:
                best, best_pos = rank, pos
        return best_pos

    @staticmethod
    def _format_contents(contents: dict[ItemKind, int]) -> str:
        return ", ".join(f"{count} {item.value}" for item, count in contents.items())

    def query_chest(self, actor_id: str) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        pos = self._nearest_chest(actor.position)
        if pos is None:
            return ActionResult(False, "no chest nearby")
        contents = self.chests[pos]
        if not contents:
            return ActionResult(True, "chest is empty")
        return ActionResult(True, self._format_contents(contents))

    def open_chest(self, actor_id: str) -> ActionResult:
        """Inspect the nearest chest and take everything in it."""
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        pos = self._nearest_chest(actor.position)
        if pos is None:
            return ActionResult(False, "no chest nearby")
        contents = self.chests[pos]
        if not contents:
            return ActionResult(True, "chest is empty")
        text = self._format_contents(contents)
        for item, count in list(contents.items()):
            actor.add_item(item, count)
            self._emit(WorldEvent(tick=self.tick, kind="pickup", actor=actor.id,
                                  item=item.value, count=count, source="chest",
                                  position=pos.as_tuple()))
        self.chests[pos] = {}
        return ActionResult(True, text)

    def place_block(self, actor_id: str, item: ItemKind) -> ActionResult:
        """Place a block at the actor's feet; the actor steps up onto it."""
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        if item not in PLACEABLE_ITEMS:
            return ActionResult(False, f"cannot place {item.value}")
        if actor.count(item) < 1:
            return ActionResult(False, f"do not have {item.value}")
        above = actor.position.shifted(dy=1)
        if not self.is_passable(above):
            return ActionResult(False, "no headroom to step up")
        placed_at = actor.position
        actor.remove_item(item)
        self.blocks[placed_at.as_tuple()] = _ITEM_TO_BLOCK[item]
        self._emit(WorldEvent(tick=self.tick, kind="place", actor=actor.id,
                              item=item.value, count=1,
                              position=placed_at.as_tuple()))
        self._move_entity(actor, above)
        return ActionResult(True, f"placed {item.value}")

    _DIRECTIONS = {
        "north": (0, 0, -1),
        "south": (0, 0, 1),
        "east": (1, 0, 0),
        "west": (-1, 0, 0),
        "up": (0, 1, 0),
        "down": (0, -1, 0),
    }

    def move_entity(self, actor_id: str, direction: str) -> ActionResult:
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        delta = self._DIRECTIONS.get(direction)
        if delta is None:
            return ActionResult(False, f"unknown direction {direction}")
        if direction == "up":
            return ActionResult(False, "cannot move up in the air; place a block to climb")
        dest = actor.position.shifted(*delta)
        if not in_bounds(dest):
            return ActionResult(False, "out of bounds")
        block = self.block_at(dest)
        if block is not BlockKind.AIR:
            return ActionResult(False, f"blocked by {block.value}")
        self._move_entity(actor, dest)
        return ActionResult(True, f"moved {direction}")

    def sleep_in_bed(self, actor_id: str) -> ActionResult:
        """Sleeping in a carried bed forces daytime."""
        actor, err = self._check_actor(actor_id)
        if err:
            return err
        if actor.count(ItemKind.BED) < 1:
            return ActionResult(False, "do not have bed")
        if self.time_of_day != "day":
            self.time_of_day = "day"
            self._next_time_flip = self.tick + C.DAY_LENGTH_TICKS
            self._emit(WorldEvent(tick=self.tick, kind="time", actor=actor.id,
                                  text="day", source="sleep"))
        return ActionResult(True, "slept until morning")

    # --- bookkeeping --------------------------------------------------------

    def total_item_count(self) -> int:
        """Total items across inventories, chests, and the ground."""
        total = 0
        for entity in self.entities.values():
            total += sum(entity.inventory.values())
        for contents in self.chests.values():
            total += sum(contents.values())
        for pile in self.ground.values():
            total += sum(pile.values())
        return total

    def to_canonical_dict(self) -> dict:
        entities = {}
        for entity in self.entities.values():
            entities[entity.id] = {
                "kind": entity.kind.value,
                "name": entity.name,
                "position": list(entity.position.as_tuple()),
                "health": entity.health,
                "equipped": entity.equipped.value if entity.equipped else None,
                "inventory": {i.value: c for i, c in sorted(entity.inventory.items())},
                "following": entity.following,
                "region": entity.region,
            }
        return {
            "seed": self.seed,
            "tick": self.tick,
            "time_of_day": self.time_of_day,
            "blocks": {
                f"{x},{y},{z}": kind.value
                for (x, y, z), kind in self.blocks.items()
            },
            "entities": entities,
            "chests": {
                pos.key(): {i.value: c for i, c in sorted(contents.items())}
                for pos, contents in self.chests.items()
            },
            "ground": {
                pos.key(): {i.value: c for i, c in sorted(pile.items())}
                for pos, pile in self.ground.items()
            },
        }

    def to_canonical_json(self) -> str:
        """Canonical snapshot: sorted keys, compact separators."""
        return json.dumps(self.to_canonical_dict(), sort_keys=True,
                          separators=(",", ":"))


def create_world(seed: int) -> WorldState:
    """Build the deterministic quest world for a seed."""
    return WorldState(seed)
