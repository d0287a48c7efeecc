"""Counterfactual explanations for a grammar-based grid-world command parser.

Given a user utterance the parser rejects, plus a demonstration of the
intended goal, the engine finds the in-grammar sentence most similar to the
utterance whose program provably achieves the demonstrated goal.
"""

__version__ = "0.1.0"

from .explain import (
    ExplanationRequest,
    ExplanationResult,
    NoValidExplanation,
    check_success,
    explain_naive,
    explain_no_demo,
    explain_no_utterance,
    explain_pruned,
)
from .gridworld import (
    Action,
    AgentPose,
    Color,
    Direction,
    GridState,
    IllegalAction,
    InvalidTrajectory,
    ObjectKind,
    Trajectory,
    WorldObject,
    facing_object,
    replay,
    step,
)
from .grammar import ParseError, enumerate_sentences, normalize, parse, unparse
from .programs import (
    Descriptor,
    GoTo,
    PickUp,
    Program,
    PutNext,
    Seq,
    Unsatisfiable,
    consistent_set,
    enumerate_programs,
    execute,
    satisfied,
)
from .similarity import (
    FluencyModel,
    Lexicon,
    build_default_lexicon,
    distance,
    embed,
    fluency,
    load_bundled_lexicon,
    load_lexicon,
    remote_embed,
)
from .tasks import GenerationFailed, Task, generate_tasks
