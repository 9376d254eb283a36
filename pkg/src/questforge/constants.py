"""Single table of world geometry, combat numbers, and interaction ranges.

Every tunable the simulator uses lives here so that tests, fixtures, and the
walkthrough generator stay in sync with the engine.  Distances are Manhattan
throughout the simulator.
"""

from __future__ import annotations

# World grid bounds: [0, W) x [0, H) x [0, D).
WORLD_W = 64
WORLD_H = 48
WORLD_D = 64

# Village ground: solid layers fill y=0..3, so entities stand at y=4.
VILLAGE_GROUND_Y = 4

# Floating island: a 24x24 stone platform at y=30, directly above the
# village; entities on it stand at y=31.
ISLAND_FLOOR_Y = 30
ISLAND_STAND_Y = 31
ISLAND_MIN_X = 20
ISLAND_MIN_Z = 20
ISLAND_SIZE = 24
# Anything at or above this y within the platform footprint counts as
# "on the island" for movement clamps and quest detection.
ISLAND_REGION_MIN_Y = 29

# Combat table.  Spiders die in two hits, zombies in three.
MOB_DAMAGE = 2
ATTACK_DAMAGE = 4
SPIDER_HEALTH = 8
ZOMBIE_HEALTH = 12
CREEPER_HEALTH = 10
NPC_HEALTH = 20
PLAYER_HEALTH = 20

# Interaction ranges (Manhattan blocks).
AGGRO_RADIUS = 8
MOB_ATTACK_RANGE = 1
MINE_RANGE = 6
ATTACK_RANGE = 3
TRANSFER_RANGE = 3
CHEST_RANGE = 4
HEARING_RANGE = 8

# goToPlayer walks one block per tick until within this range, giving up
# after the tick limit.
GOTO_STOP_RANGE = 2
GOTO_TICK_LIMIT = 50

# Day/night flips every this many ticks; sleeping in a bed forces day.
DAY_LENGTH_TICKS = 1000

# --- Fixed layout -----------------------------------------------------------
# The layout is identical for every seed; the seed drives the world's RNG,
# which varies decoration (tree heights, boulder placement) and feeds any
# stochastic mechanics.  Spawn-critical positions are pinned so the
# createWorld postconditions hold for all seeds.

PLAYER_SPAWN = (13, 4, 15)
ELENA_POS = (15, 4, 15)
ALARIC_POS = (32, 31, 32)

VILLAGE_CHEST_POS = (16, 4, 15)
HOUSE_CHEST_POS = (8, 4, 19)
ISLAND_CHEST_POS = (33, 31, 32)
SWORD_CHEST_POS = (41, 31, 41)

# Spiders sit 9 blocks from Alaric: inside the "near Alaric" radius of 10
# used by quest tracking, but outside the aggro radius of 8, so they hold
# still until someone approaches.
SPIDER_SPAWNS = ((41, 31, 32), (23, 31, 32), (32, 31, 41))
# Zombies flank the sword chest.
ZOMBIE_SPAWNS = ((40, 31, 41), (42, 31, 41))

# House footprints: (x0, z0, x1, z1) inclusive walls, door mid-south wall.
HOUSE_FOOTPRINTS = (
    (12, 9, 16, 13),   # Elena's house; she stands just south of it
    (6, 17, 10, 21),   # second chest lives inside this one
    (24, 8, 28, 12),
    (4, 36, 8, 40),
)
HOUSE_WALL_HEIGHT = 3

# Tree trunks (x, z); heights drawn from the world RNG.
TREE_SPOTS = ((24, 18), (8, 26), (38, 6), (30, 44), (48, 30))
TREE_MIN_HEIGHT = 3
TREE_MAX_HEIGHT = 5

# Candidate spots for loose cobblestone boulders; the RNG picks a subset.
# All candidates stay clear of the spawn-to-island corridor.
BOULDER_CANDIDATES = (
    (10, 10), (26, 20), (14, 30), (40, 10), (6, 44), (30, 6), (44, 22), (52, 12),
)
BOULDER_COUNT = 4
