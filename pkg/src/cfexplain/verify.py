"""Self-check suites: enumeration counts, executor soundness, and the
naive-vs-pruned equivalence. Shared by `cfexplain verify` and the test suite.
"""

from __future__ import annotations

import random
from typing import Callable

from .explain import ExplanationRequest, explain_naive, explain_pruned
from .gridworld import (
    AgentPose,
    Color,
    Direction,
    GridState,
    ObjectKind,
    Trajectory,
    WorldObject,
    replay,
)
from .grammar import enumerate_sentences, sentence_text
from .programs import (
    Unsatisfiable,
    consistent_set,
    enumerate_programs,
    execute,
)
from .similarity import Lexicon, build_default_lexicon
from .tasks import _sample_atomic, _sample_world


def fixed_world() -> GridState:
    """8x8 room with six objects; used by the executor-soundness oracle."""
    return GridState(
        width=8,
        height=8,
        objects=(
            WorldObject(1, ObjectKind.BALL, Color.BLUE, (5, 2)),
            WorldObject(2, ObjectKind.BOX, Color.GREEN, (2, 5)),
            WorldObject(3, ObjectKind.KEY, Color.GREY, (6, 6)),
            WorldObject(4, ObjectKind.BALL, Color.RED, (3, 3)),
            WorldObject(5, ObjectKind.BOX, Color.YELLOW, (6, 4)),
            WorldObject(6, ObjectKind.KEY, Color.PURPLE, (1, 1)),
        ),
        agent=AgentPose((1, 4), Direction.EAST),
    )


def random_scenario(seed: int, depth_bound: int = 2) -> ExplanationRequest:
    """Seeded (world, demonstration, utterance) triple for equivalence checks.

    The utterance is the goal's canonical sentence with one token swapped for
    an out-of-grammar word, mimicking a user's near-miss phrasing.
    """
    from .grammar import unparse

    rng = random.Random(seed)
    while True:
        state = _sample_world(rng, 8, 8)
        goal = _sample_atomic(rng, state)
        try:
            demo = execute(goal, state)
        except Unsatisfiable:
            continue
        sentence = list(unparse(goal))
        swaps = {"ball": "circle", "box": "cube", "key": "opener", "go": "navigate",
                 "pick": "grab", "put": "place"}
        for i, tok in enumerate(sentence):
            if tok in swaps and rng.random() < 0.8:
                sentence[i] = swaps[tok]
        return ExplanationRequest(
            utterance=tuple(sentence), demonstration=demo, depth_bound=depth_bound
        )


def check_enumeration_counts() -> bool:
    return len(enumerate_programs(1)) == 360 and len(enumerate_programs(2)) == 129_960


def check_executor_soundness(depth: int = 1) -> tuple[int, int, list]:
    """Run every depth-1 program in the fixed world; each solvable one must be
    a member of the consistent set of its own trajectory."""
    world = fixed_world()
    solvable = 0
    failures = []
    programs = [p for p in enumerate_programs(depth) if p in set(enumerate_programs(1))]
    for prog in programs:
        try:
            traj = execute(prog, world)
        except Unsatisfiable:
            continue
        solvable += 1
        if prog not in set(consistent_set(traj, depth)):
            failures.append(prog)
    return solvable, len(programs), failures


def check_equivalence(seeds: range, lex: Lexicon | None = None, depth_bound: int = 1) -> list:
    """Naive and pruned searches must agree bit-exactly on every seed."""
    lex = lex or build_default_lexicon()
    mismatches = []
    for seed in seeds:
        req = random_scenario(seed, depth_bound=depth_bound)
        naive = explain_naive(req, lex)
        pruned = explain_pruned(req, lex)
        if (
            naive.explanation != pruned.explanation
            or naive.similarity != pruned.similarity
            or naive.candidates != pruned.candidates
        ):
            mismatches.append(seed)
    return mismatches


def run_verification(seeds: int = 5, report: Callable[[str], None] = print) -> bool:
    ok = True

    counts_ok = check_enumeration_counts()
    ok &= counts_ok
    report(f"enumeration counts (360 / 129960): {'PASS' if counts_ok else 'FAIL'}")

    solvable, total, failures = check_executor_soundness()
    sound = not failures
    ok &= sound
    report(
        f"executor soundness ({solvable}/{total} solvable, {len(failures)} unsound): "
        f"{'PASS' if sound else 'FAIL'}"
    )

    mismatches = check_equivalence(range(seeds))
    eq_ok = not mismatches
    ok &= eq_ok
    report(
        f"naive/pruned equivalence over {seeds} scenarios: "
        f"{'PASS' if eq_ok else 'FAIL ' + str(mismatches)}"
    )
    return ok
