"""The program space: command ASTs, goal predicates over trajectories,
bounded-depth enumeration, demonstration-consistent sets, and a deterministic
BFS planner that gives every solvable program a concrete trajectory.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

from .gridworld import (
    ACTIONS,
    Action,
    AgentPose,
    Color,
    COLORS,
    DIR_VECTORS,
    Direction,
    GridState,
    KINDS,
    ObjectKind,
    Trajectory,
    WorldObject,
    facing_object,
    replay,
    step,
)


class Unsatisfiable(Exception):
    """No matching object exists or no plan reaches the goal."""


@dataclass(frozen=True)
class Descriptor:
    color: Color
    kind: ObjectKind

    def matches(self, obj: Optional[WorldObject]) -> bool:
        return obj is not None and obj.color == self.color and obj.kind == self.kind


@dataclass(frozen=True)
class GoTo:
    target: Descriptor


@dataclass(frozen=True)
class PickUp:
    target: Descriptor


@dataclass(frozen=True)
class PutNext:
    source: Descriptor
    dest: Descriptor


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


Program = Union[GoTo, PickUp, PutNext, Seq]


def atomic_count(prog: Program) -> int:
    if isinstance(prog, Seq):
        return atomic_count(prog.first) + atomic_count(prog.second)
    return 1


# --- goal predicates ---
#
# A program is satisfied by a replayed state sequence iff it has a witness
# time. Pickup and drop events are inferred from consecutive states (the
# carried slot changing), so the action list is not needed.

def _witness_times(prog: Program, states: list[GridState]) -> tuple[int, ...]:
    if isinstance(prog, GoTo):
        return tuple(
            t for t, s in enumerate(states) if prog.target.matches(facing_object(s))
        )
    if isinstance(prog, PickUp):
        times = []
        for t in range(1, len(states)):
            held = states[t].carrying
            before = states[t - 1].carrying
            if prog.target.matches(held) and (before is None or before.id != held.id):
                times.append(t)
        return tuple(times)
    if isinstance(prog, PutNext):
        times = []
        for t in range(1, len(states)):
            dropped = states[t - 1].carrying
            if dropped is None or states[t].carrying is not None:
                continue
            if not prog.source.matches(dropped):
                continue
            landing = next(
                o.position for o in states[t].objects if o.id == dropped.id
            )
            col, row = landing
            neighbors = {(col + 1, row), (col - 1, row), (col, row + 1), (col, row - 1)}
            for other in states[t].objects:
                if other.id != dropped.id and prog.dest.matches(other) and other.position in neighbors:
                    times.append(t)
                    break
        return tuple(times)
    if isinstance(prog, Seq):
        first = _witness_times(prog.first, states)
        if not first:
            return ()
        earliest = first[0]
        return tuple(t for t in _witness_times(prog.second, states) if t >= earliest)
    raise TypeError(f"not a program: {prog!r}")


def satisfied(prog: Program, states: list[GridState]) -> bool:
    """True iff the demonstrated state sequence achieves the program's goal."""
    return bool(_witness_times(prog, states))


# --- enumeration ---

def _descriptors() -> list[Descriptor]:
    return [Descriptor(c, k) for c in COLORS for k in KINDS]


@lru_cache(maxsize=8)
def _atomic_programs() -> tuple[Program, ...]:
    descs = _descriptors()
    atoms: list[Program] = [GoTo(d) for d in descs]
    atoms += [PickUp(d) for d in descs]
    atoms += [PutNext(d1, d2) for d1 in descs for d2 in descs]
    return tuple(atoms)


def enumerate_programs(depth_bound: int) -> list[Program]:
    """All programs with at most depth_bound atomic commands, canonical order:
    atomic tier first (GoTo, PickUp, PutNext, descriptors by color then kind),
    then sequences ordered first-major.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound must be >= 1")
    atoms = _atomic_programs()
    out: list[Program] = list(atoms)
    if depth_bound >= 2:
        # Depth is capped at two atomic commands; deeper tiers are out of scope.
        out += [Seq(p, q) for p in atoms for q in atoms]
    return out


def consistent_set(traj: Trajectory, depth_bound: int) -> list[Program]:
    """Programs (up to depth_bound) whose goals the demonstration achieves,
    in canonical enumeration order."""
    states = replay(traj)
    atoms = _atomic_programs()
    witnesses = {p: _witness_times(p, states) for p in atoms}
    out: list[Program] = [p for p in atoms if witnesses[p]]
    if depth_bound >= 2:
        for p in atoms:
            wp = witnesses[p]
            if not wp:
                continue
            earliest = wp[0]
            for q in atoms:
                wq = witnesses[q]
                if wq and wq[-1] >= earliest:
                    out.append(Seq(p, q))
    return out


# --- planner / executor ---

def _nav_bfs(state: GridState, goal_cells: set[tuple[int, int]]) -> Optional[list[Action]]:
    """Shortest turn/forward sequence to a pose facing one of goal_cells.

    Obstacles are the current object positions (static during navigation).
    Neighbors expand in canonical action order, so among equal-length plans
    the lexicographically smallest wins.
    """
    obstacles = {o.position for o in state.objects}

    def faced(pose: AgentPose) -> tuple[int, int]:
        dc, dr = DIR_VECTORS[pose.direction]
        return (pose.position[0] + dc, pose.position[1] + dr)

    start = state.agent
    if faced(start) in goal_cells:
        return []
    ring = (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST)
    seen = {start}
    queue: deque[tuple[AgentPose, list[Action]]] = deque([(start, [])])
    while queue:
        pose, path = queue.popleft()
        for action in (Action.TURN_LEFT, Action.TURN_RIGHT, Action.FORWARD):
            if action is Action.FORWARD:
                target = faced(pose)
                if not state.in_room(target) or target in obstacles:
                    continue
                nxt = AgentPose(target, pose.direction)
            else:
                offset = 1 if action is Action.TURN_RIGHT else -1
                nxt = AgentPose(pose.position, ring[(ring.index(pose.direction) + offset) % 4])
            if nxt in seen:
                continue
            if faced(nxt) in goal_cells:
                return path + [action]
            seen.add(nxt)
            queue.append((nxt, path + [action]))
    return None


def _plan_goto_object(state: GridState, desc: Descriptor) -> tuple[list[Action], WorldObject]:
    """Plan to face the nearest object matching desc; ties by lowest id."""
    matches = sorted((o for o in state.objects if desc.matches(o)), key=lambda o: o.id)
    if not matches:
        raise Unsatisfiable(f"no {desc.color.value} {desc.kind.value} in the room")
    best: Optional[tuple[int, int, list[Action], WorldObject]] = None
    for obj in matches:
        plan = _nav_bfs(state, {obj.position})
        if plan is None:
            continue
        key = (len(plan), obj.id)
        if best is None or key < best[:2]:
            best = (len(plan), obj.id, plan, obj)
    if best is None:
        raise Unsatisfiable(f"no path to any {desc.color.value} {desc.kind.value}")
    return best[2], best[3]


def _plan_drop_anywhere(state: GridState) -> list[Action]:
    """Face any free in-room cell (to unload a carried object)."""
    obstacles = {o.position for o in state.objects}
    free = {
        (c, r)
        for c in range(1, state.width - 1)
        for r in range(1, state.height - 1)
        if (c, r) not in obstacles and (c, r) != state.agent.position
    }
    plan = _nav_bfs(state, free)
    if plan is None:
        raise Unsatisfiable("no free cell to drop the carried object")
    return plan + [Action.DROP]


def _apply(state: GridState, actions: Iterable[Action]) -> GridState:
    for a in actions:
        state = step(state, a)
    return state


def _execute_from(prog: Program, state: GridState) -> tuple[list[Action], GridState]:
    if isinstance(prog, GoTo):
        plan, _ = _plan_goto_object(state, prog.target)
        return plan, _apply(state, plan)

    if isinstance(prog, PickUp):
        actions: list[Action] = []
        if state.carrying is not None:
            unload = _plan_drop_anywhere(state)
            actions += unload
            state = _apply(state, unload)
        plan, _ = _plan_goto_object(state, prog.target)
        actions += plan + [Action.PICKUP]
        return actions, _apply(state, plan + [Action.PICKUP])

    if isinstance(prog, PutNext):
        actions = []
        if state.carrying is not None and not prog.source.matches(state.carrying):
            unload = _plan_drop_anywhere(state)
            actions += unload
            state = _apply(state, unload)
        if state.carrying is None:
            plan, _ = _plan_goto_object(state, prog.source)
            actions += plan + [Action.PICKUP]
            state = _apply(state, plan + [Action.PICKUP])
        # Face a free cell 4-adjacent to a matching destination object.
        obstacles = {o.position for o in state.objects}
        drop_cells = set()
        for obj in state.objects:
            if not prog.dest.matches(obj):
                continue
            col, row = obj.position
            for cell in ((col + 1, row), (col - 1, row), (col, row + 1), (col, row - 1)):
                if state.in_room(cell) and cell not in obstacles:
                    drop_cells.add(cell)
        if not drop_cells:
            raise Unsatisfiable(
                f"no free cell next to a {prog.dest.color.value} {prog.dest.kind.value}"
            )
        plan = _nav_bfs(state, drop_cells)
        if plan is None:
            raise Unsatisfiable("no path to a drop cell next to the destination")
        actions += plan + [Action.DROP]
        return actions, _apply(state, plan + [Action.DROP])

    if isinstance(prog, Seq):
        first_actions, mid = _execute_from(prog.first, state)
        second_actions, end = _execute_from(prog.second, mid)
        return first_actions + second_actions, end

    raise TypeError(f"not a program: {prog!r}")


def execute(prog: Program, initial: GridState) -> Trajectory:
    """Deterministic shortest-plan trajectory achieving the program's goal."""
    actions, _ = _execute_from(prog, initial)
    return Trajectory(initial=initial, actions=tuple(actions))


# --- text form: prefix notation, round-trips losslessly ---

def program_to_text(prog: Program) -> str:
    if isinstance(prog, GoTo):
        return f"goto({prog.target.color.value},{prog.target.kind.value})"
    if isinstance(prog, PickUp):
        return f"pickup({prog.target.color.value},{prog.target.kind.value})"
    if isinstance(prog, PutNext):
        return (
            f"putnext({prog.source.color.value},{prog.source.kind.value},"
            f"{prog.dest.color.value},{prog.dest.kind.value})"
        )
    if isinstance(prog, Seq):
        return f"seq({program_to_text(prog.first)}, {program_to_text(prog.second)})"
    raise TypeError(f"not a program: {prog!r}")


class ProgramSyntaxError(ValueError):
    pass


def program_from_text(text: str) -> Program:
    text = text.strip()

    def parse_at(s: str, i: int) -> tuple[Program, int]:
        for name in ("goto", "pickup", "putnext", "seq"):
            if s.startswith(name + "(", i):
                i += len(name) + 1
                if name == "seq":
                    first, i = parse_at(s, i)
                    i = expect(s, i, ",")
                    second, i = parse_at(s, i)
                    i = expect(s, i, ")")
                    return Seq(first, second), i
                close = s.find(")", i)
                if close < 0:
                    raise ProgramSyntaxError(f"missing ')' in {s!r}")
                args = [a.strip() for a in s[i:close].split(",")]
                i = close + 1
                try:
                    if name == "putnext":
                        c1, k1, c2, k2 = args
                        return PutNext(
                            Descriptor(Color(c1), ObjectKind(k1)),
                            Descriptor(Color(c2), ObjectKind(k2)),
                        ), i
                    (c, k) = args
                    desc = Descriptor(Color(c), ObjectKind(k))
                    return (GoTo(desc) if name == "goto" else PickUp(desc)), i
                except ValueError as exc:
                    raise ProgramSyntaxError(f"bad arguments in {s!r}: {exc}") from exc
        raise ProgramSyntaxError(f"expected a command at position {i} in {text!r}")

    def expect(s: str, i: int, ch: str) -> int:
        while i < len(s) and s[i] == " ":
            i += 1
        if i >= len(s) or s[i] != ch:
            raise ProgramSyntaxError(f"expected {ch!r} at position {i} in {text!r}")
        i += 1
        while i < len(s) and s[i] == " ":
            i += 1
        return i

    prog, end = parse_at(text, 0)
    if text[end:].strip():
        raise ProgramSyntaxError(f"trailing input in {text!r}")
    return prog
