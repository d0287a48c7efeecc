"""Counterfactual-explanation search: the exhaustive scan over all bounded
sentences, its constraint-pruned equivalent, the two ablations, and the
parse-success check used for session analysis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .gridworld import Trajectory
from .grammar import ParseError, Sentence, enumerate_sentences, parse, unparse
from .programs import Program, Unsatisfiable, consistent_set, execute
from .similarity import FluencyModel, Lexicon, cosine, embed


class NoValidExplanation(Exception):
    """No bounded-depth program is consistent with the demonstration."""


@dataclass(frozen=True)
class ExplanationRequest:
    utterance: Sentence
    demonstration: Trajectory
    depth_bound: int = 2
    # Definition-style exact constraint: keep only programs whose planned
    # trajectory reproduces the demonstrated action sequence exactly. Too
    # strict for nondeterministic goals, so off by default.
    exact_denotation: bool = False


@dataclass(frozen=True)
class Candidate:
    sentence: Sentence
    program: Program
    score: float  # cosine similarity (full/no_demo) or perplexity (no_utterance)


@dataclass(frozen=True)
class ExplanationResult:
    explanation: Sentence
    program: Program
    similarity: Optional[float]  # cosine to the utterance; None for no_utterance
    candidates: tuple[Candidate, ...] = field(repr=False)
    method: str = "full"


def _rank(scored: list[tuple[int, Sentence, Program, float]], minimize: bool = False):
    """Order by score (ties by earliest canonical position) and return the
    winner plus the full ranking."""
    sign = 1.0 if minimize else -1.0
    ordered = sorted(scored, key=lambda item: (sign * item[3], item[0]))
    return ordered[0], ordered


def _exact_denotation_holds(prog: Program, demo: Trajectory) -> bool:
    try:
        return execute(prog, demo.initial).actions == demo.actions
    except Unsatisfiable:
        return False


def explain_naive(req: ExplanationRequest, lex: Lexicon) -> ExplanationResult:
    """Scan every bounded-depth sentence, keep those whose parse is consistent
    with the demonstration, and return the most similar to the utterance."""
    valid = set(consistent_set(req.demonstration, req.depth_bound))
    query = embed(req.utterance, lex)
    scored = []
    for idx, sentence in enumerate(enumerate_sentences(req.depth_bound)):
        prog = parse(sentence)
        if prog not in valid:
            continue
        if req.exact_denotation and not _exact_denotation_holds(prog, req.demonstration):
            continue
        scored.append((idx, sentence, prog, cosine(embed(sentence, lex), query)))
    if not scored:
        raise NoValidExplanation("no in-grammar program achieves the demonstrated goal")
    (_, sentence, prog, sim), ordered = _rank(scored)
    return ExplanationResult(
        explanation=sentence,
        program=prog,
        similarity=sim,
        candidates=tuple(Candidate(s, p, c) for _, s, p, c in ordered),
        method="full",
    )


def explain_pruned(req: ExplanationRequest, lex: Lexicon) -> ExplanationResult:
    """Same result as explain_naive, but scores only the consistent programs'
    canonical sentences instead of scanning the whole language."""
    valid = consistent_set(req.demonstration, req.depth_bound)
    if req.exact_denotation:
        valid = [p for p in valid if _exact_denotation_holds(p, req.demonstration)]
    if not valid:
        raise NoValidExplanation("no in-grammar program achieves the demonstrated goal")
    query = embed(req.utterance, lex)
    positions = _canonical_positions(req.depth_bound)
    scored = [
        (positions[prog], unparse(prog), prog, cosine(embed(unparse(prog), lex), query))
        for prog in valid
    ]
    (_, sentence, prog, sim), ordered = _rank(scored)
    return ExplanationResult(
        explanation=sentence,
        program=prog,
        similarity=sim,
        candidates=tuple(Candidate(s, p, c) for _, s, p, c in ordered),
        method="full",
    )


_POSITION_CACHE: dict[int, dict[Program, int]] = {}


def _canonical_positions(depth_bound: int) -> dict[Program, int]:
    from .programs import enumerate_programs

    cached = _POSITION_CACHE.get(depth_bound)
    if cached is None:
        cached = {p: i for i, p in enumerate(enumerate_programs(depth_bound))}
        _POSITION_CACHE[depth_bound] = cached
    return cached


def explain_no_demo(
    utterance: Sentence, depth_bound: int, lex: Lexicon, top_k: int = 50
) -> ExplanationResult:
    """Ablation without the goal constraint: most similar sentence overall."""
    from . import kernels
    from .similarity import embed_batch

    sentences = enumerate_sentences(depth_bound)
    matrix = embed_batch(sentences, lex)
    scores = kernels.cosine_scores(matrix, embed(utterance, lex))
    scored = [(i, s, parse(s), float(scores[i])) for i, s in enumerate(sentences)]
    (_, sentence, prog, sim), ordered = _rank(scored)
    return ExplanationResult(
        explanation=sentence,
        program=prog,
        similarity=sim,
        candidates=tuple(Candidate(s, p, c) for _, s, p, c in ordered[:top_k]),
        method="no_demo",
    )


def explain_no_utterance(
    demo: Trajectory, depth_bound: int, model: FluencyModel
) -> ExplanationResult:
    """Ablation without the utterance: goal-consistent sentence of minimal
    bigram perplexity."""
    from .similarity import fluency

    valid = consistent_set(demo, depth_bound)
    if not valid:
        raise NoValidExplanation("no in-grammar program achieves the demonstrated goal")
    positions = _canonical_positions(depth_bound)
    scored = [
        (positions[prog], unparse(prog), prog, fluency(unparse(prog), model))
        for prog in valid
    ]
    (_, sentence, prog, _score), ordered = _rank(scored, minimize=True)
    return ExplanationResult(
        explanation=sentence,
        program=prog,
        similarity=None,
        candidates=tuple(Candidate(s, p, c) for _, s, p, c in ordered),
        method="no_utterance",
    )


def check_success(sentence: Sentence, demo: Trajectory, depth_bound: int) -> bool:
    """True iff the sentence parses and its program is consistent with the
    demonstration (a parse failure counts as not successful)."""
    try:
        prog = parse(sentence)
    except ParseError:
        return False
    return prog in set(consistent_set(demo, depth_bound))
