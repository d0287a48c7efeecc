"""Single-room grid environment: colored objects, an oriented agent, five actions.

Coordinates are (col, row) with (0, 0) at the top-left; the perimeter ring of
cells is wall. All values are immutable; `step` returns a new state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


class Color(str, Enum):
    BLUE = "blue"
    GREEN = "green"
    GREY = "grey"
    PURPLE = "purple"
    RED = "red"
    YELLOW = "yellow"


class ObjectKind(str, Enum):
    BALL = "ball"
    BOX = "box"
    KEY = "key"


# Alphabetical, used everywhere a canonical order is needed.
COLORS = sorted(Color, key=lambda c: c.value)
KINDS = sorted(ObjectKind, key=lambda k: k.value)


class Direction(str, Enum):
    NORTH = "north"
    EAST = "east"
    SOUTH = "south"
    WEST = "west"


# Clockwise ring; turn_right steps forward, turn_left steps back.
_DIR_RING = (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST)
DIR_VECTORS = {
    Direction.NORTH: (0, -1),
    Direction.EAST: (1, 0),
    Direction.SOUTH: (0, 1),
    Direction.WEST: (-1, 0),
}


class Action(str, Enum):
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"
    FORWARD = "forward"
    PICKUP = "pickup"
    DROP = "drop"


# Canonical order for planner tie-breaking.
ACTIONS = (Action.TURN_LEFT, Action.TURN_RIGHT, Action.FORWARD, Action.PICKUP, Action.DROP)


class IllegalAction(Exception):
    """pickup/drop precondition failure (blocked forward is a silent no-op)."""


class InvalidTrajectory(Exception):
    def __init__(self, index: int, cause: Exception | None = None):
        self.index = index
        super().__init__(f"illegal action at index {index}" + (f": {cause}" if cause else ""))


@dataclass(frozen=True)
class WorldObject:
    id: int
    kind: ObjectKind
    color: Color
    position: Optional[tuple[int, int]]  # None while carried


@dataclass(frozen=True)
class AgentPose:
    position: tuple[int, int]
    direction: Direction


@dataclass(frozen=True)
class GridState:
    width: int
    height: int
    objects: tuple[WorldObject, ...]  # sorted by id, all with positions
    agent: AgentPose
    carrying: Optional[WorldObject] = None

    def in_room(self, cell: tuple[int, int]) -> bool:
        col, row = cell
        return 1 <= col <= self.width - 2 and 1 <= row <= self.height - 2

    def object_at(self, cell: tuple[int, int]) -> Optional[WorldObject]:
        for obj in self.objects:
            if obj.position == cell:
                return obj
        return None

    def faced_cell(self) -> tuple[int, int]:
        dc, dr = DIR_VECTORS[self.agent.direction]
        col, row = self.agent.position
        return (col + dc, row + dr)


def validate(state: GridState) -> None:
    """Raise ValueError if any structural invariant is violated."""
    if state.width < 3 or state.height < 3:
        raise ValueError("room must be at least 3x3 including walls")
    ids = [o.id for o in state.objects]
    if state.carrying is not None:
        ids.append(state.carrying.id)
        if state.carrying.position is not None:
            raise ValueError("carried object must not have a grid position")
    if len(ids) != len(set(ids)):
        raise ValueError("object ids must be unique")
    positions = [o.position for o in state.objects]
    if len(positions) != len(set(positions)):
        raise ValueError("objects must occupy distinct cells")
    for obj in state.objects:
        if obj.position is None or not state.in_room(obj.position):
            raise ValueError(f"object {obj.id} outside the room")
    if not state.in_room(state.agent.position):
        raise ValueError("agent outside the room")
    if state.object_at(state.agent.position) is not None:
        raise ValueError("agent cell must not contain an object")


def _with_objects(state: GridState, objects) -> tuple[WorldObject, ...]:
    return tuple(sorted(objects, key=lambda o: o.id))


def step(state: GridState, action: Action) -> GridState:
    """Deterministic successor state.

    Blocked forward (wall or object ahead) leaves the pose unchanged; invalid
    pickup/drop raises IllegalAction.
    """
    if action is Action.TURN_LEFT or action is Action.TURN_RIGHT:
        offset = 1 if action is Action.TURN_RIGHT else -1
        idx = _DIR_RING.index(state.agent.direction)
        new_dir = _DIR_RING[(idx + offset) % 4]
        return replace(state, agent=replace(state.agent, direction=new_dir))

    target = state.faced_cell()
    if action is Action.FORWARD:
        if state.in_room(target) and state.object_at(target) is None:
            return replace(state, agent=replace(state.agent, position=target))
        return state

    if action is Action.PICKUP:
        obj = state.object_at(target)
        if obj is None:
            raise IllegalAction("pickup: no object in the faced cell")
        if state.carrying is not None:
            raise IllegalAction("pickup: already carrying an object")
        remaining = [o for o in state.objects if o.id != obj.id]
        return replace(
            state,
            objects=_with_objects(state, remaining),
            carrying=replace(obj, position=None),
        )

    if action is Action.DROP:
        if state.carrying is None:
            raise IllegalAction("drop: not carrying an object")
        if not state.in_room(target) or state.object_at(target) is not None:
            raise IllegalAction("drop: faced cell is not free")
        placed = replace(state.carrying, position=target)
        return replace(
            state,
            objects=_with_objects(state, list(state.objects) + [placed]),
            carrying=None,
        )

    raise ValueError(f"unknown action: {action}")


@dataclass(frozen=True)
class Trajectory:
    initial: GridState
    actions: tuple[Action, ...]


def replay(traj: Trajectory) -> list[GridState]:
    """State sequence [s0, step(s0, a1), ...]; length len(actions) + 1."""
    states = [traj.initial]
    for i, action in enumerate(traj.actions):
        try:
            states.append(step(states[-1], action))
        except IllegalAction as exc:
            raise InvalidTrajectory(i, exc) from exc
    return states


def facing_object(state: GridState) -> Optional[WorldObject]:
    return state.object_at(state.faced_cell())


# --- serialization (canonical field order as documented) ---

def state_to_dict(state: GridState) -> dict:
    return {
        "width": state.width,
        "height": state.height,
        "agent": {
            "col": state.agent.position[0],
            "row": state.agent.position[1],
            "dir": state.agent.direction.value,
        },
        "carrying": (
            None
            if state.carrying is None
            else {"kind": state.carrying.kind.value, "color": state.carrying.color.value}
        ),
        "objects": [
            {
                "id": o.id,
                "kind": o.kind.value,
                "color": o.color.value,
                "col": o.position[0],
                "row": o.position[1],
            }
            for o in state.objects
        ],
    }


def state_from_dict(data: dict) -> GridState:
    carrying = None
    if data.get("carrying") is not None:
        c = data["carrying"]
        # Carried objects have no id in the wire format; use one past the max.
        used = [o["id"] for o in data["objects"]]
        carrying = WorldObject(
            id=max(used, default=0) + 1,
            kind=ObjectKind(c["kind"]),
            color=Color(c["color"]),
            position=None,
        )
    state = GridState(
        width=data["width"],
        height=data["height"],
        objects=tuple(
            sorted(
                (
                    WorldObject(
                        id=o["id"],
                        kind=ObjectKind(o["kind"]),
                        color=Color(o["color"]),
                        position=(o["col"], o["row"]),
                    )
                    for o in data["objects"]
                ),
                key=lambda o: o.id,
            )
        ),
        agent=AgentPose(
            position=(data["agent"]["col"], data["agent"]["row"]),
            direction=Direction(data["agent"]["dir"]),
        ),
        carrying=carrying,
    )
    validate(state)
    return state


def state_to_json(state: GridState) -> str:
    return json.dumps(state_to_dict(state), indent=2)


def state_from_json(text: str) -> GridState:
    return state_from_dict(json.loads(text))


def trajectory_to_dict(traj: Trajectory) -> dict:
    return {
        "initial": state_to_dict(traj.initial),
        "actions": [a.value for a in traj.actions],
    }


def trajectory_from_dict(data: dict) -> Trajectory:
    return Trajectory(
        initial=state_from_dict(data["initial"]),
        actions=tuple(Action(a) for a in data["actions"]),
    )
