"""Fixed command grammar, exact parser, and the program<->sentence bijection.

    S    -> CMD | CMD "then" CMD
    CMD  -> "go" "to" DESC | "pick" "up" DESC | "put" DESC "next" "to" DESC
    DESC -> ("the" | "a") COLOR KIND

Canonical sentences use the article "the" and no comma before "then";
parsing accepts either article and an optional comma.
"""

from __future__ import annotations

import random
import re

from .gridworld import Color, COLORS, KINDS, ObjectKind
from .programs import (
    Descriptor,
    GoTo,
    PickUp,
    Program,
    PutNext,
    Seq,
    enumerate_programs,
)

Sentence = tuple[str, ...]

_COLOR_WORDS = {c.value for c in Color}
_KIND_WORDS = {k.value for k in ObjectKind}
TERMINALS = frozenset(
    {"go", "to", "pick", "up", "put", "next", "the", "a", "then"}
    | _COLOR_WORDS
    | _KIND_WORDS
)

_TOKEN_RE = re.compile(r"[a-z0-9']+|[^\sa-z0-9']")


def normalize(text: str) -> Sentence:
    """Lowercase, split punctuation into its own tokens, drop commas."""
    tokens = tuple(t for t in _TOKEN_RE.findall(text.lower()) if t != ",")
    if not tokens:
        raise ValueError("empty sentence")
    return tokens


class ParseError(Exception):
    def __init__(self, reason: str, token: str | None = None, position: int | None = None):
        self.reason = reason  # "unknown_token" | "structural"
        self.token = token
        self.position = position
        if reason == "unknown_token":
            super().__init__(f"unknown token {token!r}")
        else:
            super().__init__(f"cannot parse at token {position}")


def parse(sentence: Sentence | str) -> Program:
    """Exact parse; the grammar is unambiguous so the program is unique."""
    tokens = normalize(sentence) if isinstance(sentence, str) else sentence
    for tok in tokens:
        if tok not in TERMINALS:
            raise ParseError("unknown_token", token=tok)

    pos = 0

    def fail() -> ParseError:
        return ParseError("structural", position=pos)

    def take(expected: str) -> None:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != expected:
            raise fail()
        pos += 1

    def descriptor() -> Descriptor:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] not in ("the", "a"):
            raise fail()
        pos += 1
        if pos >= len(tokens) or tokens[pos] not in _COLOR_WORDS:
            raise fail()
        color = Color(tokens[pos])
        pos += 1
        if pos >= len(tokens) or tokens[pos] not in _KIND_WORDS:
            raise fail()
        kind = ObjectKind(tokens[pos])
        pos += 1
        return Descriptor(color, kind)

    def command() -> Program:
        nonlocal pos
        if pos >= len(tokens):
            raise fail()
        head = tokens[pos]
        if head == "go":
            pos += 1
            take("to")
            return GoTo(descriptor())
        if head == "pick":
            pos += 1
            take("up")
            return PickUp(descriptor())
        if head == "put":
            pos += 1
            source = descriptor()
            take("next")
            take("to")
            return PutNext(source, descriptor())
        raise fail()

    prog: Program = command()
    if pos < len(tokens):
        take("then")
        prog = Seq(prog, command())
    if pos != len(tokens):
        raise fail()
    return prog


def unparse(prog: Program) -> Sentence:
    """Canonical sentence for a program; parse(unparse(p)) == p."""
    if isinstance(prog, GoTo):
        d = prog.target
        return ("go", "to", "the", d.color.value, d.kind.value)
    if isinstance(prog, PickUp):
        d = prog.target
        return ("pick", "up", "the", d.color.value, d.kind.value)
    if isinstance(prog, PutNext):
        s, d = prog.source, prog.dest
        return (
            "put", "the", s.color.value, s.kind.value,
            "next", "to", "the", d.color.value, d.kind.value,
        )
    if isinstance(prog, Seq):
        return unparse(prog.first) + ("then",) + unparse(prog.second)
    raise TypeError(f"not a program: {prog!r}")


def sentence_text(sentence: Sentence) -> str:
    return " ".join(sentence)


def enumerate_sentences(depth_bound: int) -> list[Sentence]:
    """Canonical sentence for every program, in program enumeration order."""
    return [unparse(p) for p in enumerate_programs(depth_bound)]


def training_corpus(n: int, seed: int) -> list[tuple[Sentence, Program]]:
    """n (sentence, program) pairs sampled uniformly with replacement,
    for users who want to train an external statistical parser."""
    if n < 1:
        raise ValueError("n must be >= 1")
    programs = enumerate_programs(2)
    rng = random.Random(seed)
    pairs = []
    for _ in range(n):
        prog = programs[rng.randrange(len(programs))]
        pairs.append((unparse(prog), prog))
    return pairs


def grammar_bnf() -> str:
    colors = " | ".join(f'"{c.value}"' for c in COLORS)
    kinds = " | ".join(f'"{k.value}"' for k in KINDS)
    return (
        'S     ::= CMD | CMD "then" CMD\n'
        'CMD   ::= "go" "to" DESC | "pick" "up" DESC | "put" DESC "next" "to" DESC\n'
        'DESC  ::= ART COLOR KIND\n'
        'ART   ::= "the" | "a"\n'
        f"COLOR ::= {colors}\n"
        f"KIND  ::= {kinds}\n"
    )
