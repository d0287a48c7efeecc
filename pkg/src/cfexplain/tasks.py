"""Random solvable tasks: a world layout, a goal program, and a reference
demonstration produced by the planner. Deterministic in the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gridworld import (
    AgentPose,
    Color,
    Direction,
    GridState,
    KINDS,
    COLORS,
    Trajectory,
    WorldObject,
    state_from_dict,
    state_to_dict,
    trajectory_from_dict,
    trajectory_to_dict,
    validate,
)
from .programs import (
    Descriptor,
    GoTo,
    PickUp,
    Program,
    PutNext,
    Seq,
    Unsatisfiable,
    execute,
    program_from_text,
    program_to_text,
)


class GenerationFailed(Exception):
    pass


@dataclass(frozen=True)
class Task:
    id: str
    initial: GridState
    goal: Program
    reference_demo: Trajectory


_DIRECTIONS = list(Direction)


def _sample_world(rng: random.Random, width: int, height: int) -> GridState:
    cells = [(c, r) for c in range(1, width - 1) for r in range(1, height - 1)]
    n_objects = rng.randint(3, min(6, len(cells) - 1))
    chosen = rng.sample(cells, n_objects + 1)
    agent_cell, object_cells = chosen[0], chosen[1:]
    objects = tuple(
        WorldObject(
            id=i + 1,
            kind=rng.choice(KINDS),
            color=rng.choice(COLORS),
            position=cell,
        )
        for i, cell in enumerate(object_cells)
    )
    state = GridState(
        width=width,
        height=height,
        objects=objects,
        agent=AgentPose(agent_cell, rng.choice(_DIRECTIONS)),
    )
    validate(state)
    return state


def _sample_atomic(rng: random.Random, state: GridState) -> Program:
    obj = rng.choice(state.objects)
    desc = Descriptor(obj.color, obj.kind)
    kind = rng.randrange(3)
    if kind == 0:
        return GoTo(desc)
    if kind == 1:
        return PickUp(desc)
    others = [o for o in state.objects if (o.color, o.kind) != (obj.color, obj.kind)]
    if not others:
        return GoTo(desc)
    dest = rng.choice(others)
    return PutNext(desc, Descriptor(dest.color, dest.kind))


def generate_tasks(
    n: int,
    seed: int,
    width: int = 8,
    height: int = 8,
    max_attempts_per_task: int = 200,
) -> list[Task]:
    """n solvable tasks, deterministic in (n, seed, dimensions). For n >= 4
    both single-command and two-command goals are represented."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if width < 4 or height < 4:
        raise ValueError("room too small to hold objects")
    rng = random.Random(seed)
    tasks = []
    for i in range(n):
        want_seq = i % 2 == 1  # alternate difficulty tiers
        for _ in range(max_attempts_per_task):
            state = _sample_world(rng, width, height)
            goal: Program = _sample_atomic(rng, state)
            if want_seq:
                goal = Seq(goal, _sample_atomic(rng, state))
            try:
                demo = execute(goal, state)
            except Unsatisfiable:
                continue
            tasks.append(Task(id=f"task-{seed}-{i:03d}", initial=state, goal=goal, reference_demo=demo))
            break
        else:
            raise GenerationFailed(
                f"could not generate a solvable task after {max_attempts_per_task} attempts"
            )
    return tasks


def task_to_dict(task: Task) -> dict:
    return {
        "id": task.id,
        "initial": state_to_dict(task.initial),
        "goal": program_to_text(task.goal),
        "reference_demo": trajectory_to_dict(task.reference_demo),
    }


def task_from_dict(data: dict) -> Task:
    return Task(
        id=data["id"],
        initial=state_from_dict(data["initial"]),
        goal=program_from_text(data["goal"]),
        reference_demo=trajectory_from_dict(data["reference_demo"]),
    )
