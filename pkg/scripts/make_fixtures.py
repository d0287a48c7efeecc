"""Regenerate the bundled fixtures: lexicon, grammar BNF, and the example
task (blue ball in the top-right, two decoy objects) with its demonstration.
"""

import json
from pathlib import Path

from cfexplain.gridworld import (
    AgentPose,
    Color,
    Direction,
    GridState,
    ObjectKind,
    WorldObject,
    validate,
)
from cfexplain.grammar import grammar_bnf
from cfexplain.programs import Descriptor, GoTo, consistent_set, execute
from cfexplain.similarity import build_default_lexicon, dump_lexicon
from cfexplain.tasks import Task, task_to_dict

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "cfexplain" / "fixtures"


def example_world() -> GridState:
    state = GridState(
        width=8,
        height=8,
        objects=(
            WorldObject(1, ObjectKind.BALL, Color.BLUE, (6, 1)),
            WorldObject(2, ObjectKind.KEY, Color.GREY, (1, 6)),
            WorldObject(3, ObjectKind.BOX, Color.GREEN, (2, 6)),
        ),
        agent=AgentPose((1, 4), Direction.EAST),
    )
    validate(state)
    return state


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    (FIXTURES / "lexicon.tsv").write_text(dump_lexicon(build_default_lexicon()))
    (FIXTURES / "grammar.bnf").write_text(grammar_bnf())

    world = example_world()
    goal = GoTo(Descriptor(Color.BLUE, ObjectKind.BALL))
    demo = execute(goal, world)
    consistent = consistent_set(demo, 1)
    assert consistent == [goal], f"demo is ambiguous at depth 1: {consistent}"

    task = Task(id="example", initial=world, goal=goal, reference_demo=demo)
    (FIXTURES / "example_task.json").write_text(json.dumps(task_to_dict(task), indent=2) + "\n")
    (FIXTURES / "example_demo.json").write_text(
        json.dumps({"actions": [a.value for a in demo.actions]}, indent=2) + "\n"
    )
    print("fixtures written:", sorted(p.name for p in FIXTURES.iterdir()))
    print("demo actions:", [a.value for a in demo.actions])


if __name__ == "__main__":
    main()
