"""Sentence embeddings, the cosine distance, the bundled lexicon with synonym
groups, a client for external embedding services, and the bigram fluency
model used by the utterance-free ablation.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

import httpx
import numpy as np

from .grammar import Sentence, TERMINALS, sentence_text

DEFAULT_DIM = 16
DEFAULT_HASH_SEED = 0

# Synonym groups bundled with the default lexicon; members share one vector,
# which is what makes e.g. "circle" land exactly on "ball".
DEFAULT_SYNONYM_GROUPS = (
    ("ball", "circle", "sphere"),
    ("box", "cube", "square"),
    ("key",),
    ("go", "navigate", "walk", "move"),
    ("grab", "pick"),
    ("place", "put"),
    ("grey", "gray"),
    ("the", "a"),  # article choice must not affect similarity
)


class ZeroVector(Exception):
    pass


class ServiceUnreachable(Exception):
    pass


class DimensionMismatch(Exception):
    pass


class MalformedResponse(Exception):
    pass


def hashed_vector(token: str, dim: int, seed: int) -> np.ndarray:
    """Deterministic unit-norm vector for a token, derived from a seeded hash."""
    digest = hashlib.sha256(f"{seed}:{token}".encode()).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    vec = rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


@dataclass
class Lexicon:
    dim: int
    vectors: dict[str, np.ndarray]
    synonym_groups: tuple[tuple[str, ...], ...] = ()
    hash_seed: int = DEFAULT_HASH_SEED
    _oov_cache: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def vector(self, token: str) -> np.ndarray:
        vec = self.vectors.get(token)
        if vec is None:
            vec = self._oov_cache.get(token)
            if vec is None:
                vec = hashed_vector(token, self.dim, self.hash_seed)
                self._oov_cache[token] = vec
        return vec


def build_default_lexicon(dim: int = DEFAULT_DIM, seed: int = DEFAULT_HASH_SEED) -> Lexicon:
    """Deterministic lexicon covering every grammar terminal plus the bundled
    synonym groups (group members get byte-identical vectors)."""
    vectors: dict[str, np.ndarray] = {}
    for group in DEFAULT_SYNONYM_GROUPS:
        shared = hashed_vector(group[0], dim, seed)
        for member in group:
            vectors[member] = shared
    for token in sorted(TERMINALS):
        if token not in vectors:
            vectors[token] = hashed_vector(token, dim, seed)
    return Lexicon(dim=dim, vectors=vectors, synonym_groups=DEFAULT_SYNONYM_GROUPS, hash_seed=seed)


def save_lexicon(lex: Lexicon, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dump_lexicon(lex))


def dump_lexicon(lex: Lexicon) -> str:
    lines = [f"#synonyms: {' '.join(group)}" for group in lex.synonym_groups]
    grouped = {m for g in lex.synonym_groups for m in g[1:]}
    for token in sorted(lex.vectors):
        if token in grouped:
            continue  # re-expanded from the header at load time
        floats = " ".join(repr(float(x)) for x in lex.vectors[token])
        lines.append(f"{token}\t{floats}")
    return "\n".join(lines) + "\n"


def parse_lexicon(text: str, hash_seed: int = DEFAULT_HASH_SEED) -> Lexicon:
    vectors: dict[str, np.ndarray] = {}
    groups: list[tuple[str, ...]] = []
    dim = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#synonyms:"):
            groups.append(tuple(line[len("#synonyms:"):].split()))
            continue
        if line.startswith("#"):
            continue
        token, _, rest = line.partition("\t")
        values = np.array([float(x) for x in rest.split()])
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise ValueError(f"line {lineno}: expected {dim} floats, got {len(values)}")
        vectors[token] = values
    if dim is None:
        raise ValueError("lexicon has no vector entries")
    for group in groups:
        present = [m for m in group if m in vectors]
        if not present:
            raise ValueError(f"synonym group {group} has no vector entry")
        shared = vectors[present[0]]
        for member in group:
            vectors[member] = shared
    return Lexicon(dim=dim, vectors=vectors, synonym_groups=tuple(groups), hash_seed=hash_seed)


def load_lexicon(path: str, hash_seed: int = DEFAULT_HASH_SEED) -> Lexicon:
    with open(path) as fh:
        return parse_lexicon(fh.read(), hash_seed=hash_seed)


def load_bundled_lexicon(hash_seed: int = DEFAULT_HASH_SEED) -> Lexicon:
    text = resources.files("cfexplain.fixtures").joinpath("lexicon.tsv").read_text()
    return parse_lexicon(text, hash_seed=hash_seed)


def embed(sentence: Sentence, lex: Lexicon) -> np.ndarray:
    """Mean of token vectors; unknown tokens fall back to hashed vectors."""
    if not sentence:
        raise ValueError("empty sentence")
    acc = np.zeros(lex.dim)
    for token in sentence:
        acc += lex.vector(token)
    return acc / len(sentence)


def embed_batch(sentences: Sequence[Sentence], lex: Lexicon) -> np.ndarray:
    from . import kernels

    offsets = np.zeros(len(sentences) + 1, dtype=np.int64)
    rows = []
    for i, s in enumerate(sentences):
        for token in s:
            rows.append(lex.vector(token))
        offsets[i + 1] = offsets[i] + len(s)
    flat = np.vstack(rows) if rows else np.zeros((0, lex.dim))
    return kernels.mean_pool(flat, offsets)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine undefined for a zero vector")
    return float(np.dot(a, b)) / (na * nb)


def distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - cosine similarity; range [0, 2]."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return 1.0 - cosine(a, b)


# --- fluency: add-one smoothed bigrams over a training sentence list ---

START = "<s>"
END = "</s>"


class FluencyModel:
    def __init__(self, training: Iterable[Sentence]):
        self.bigram_counts: Counter = Counter()
        self.context_counts: Counter = Counter()
        vocab = {START, END}
        n_sentences = 0
        for sentence in training:
            n_sentences += 1
            padded = (START,) + tuple(sentence) + (END,)
            vocab.update(padded)
            for prev, cur in zip(padded, padded[1:]):
                self.bigram_counts[(prev, cur)] += 1
                self.context_counts[prev] += 1
        if n_sentences == 0:
            raise ValueError("training list is empty")
        self.vocab_size = len(vocab)

    def probability(self, prev: str, cur: str) -> float:
        return (self.bigram_counts[(prev, cur)] + 1) / (
            self.context_counts[prev] + self.vocab_size
        )

    def perplexity(self, sentence: Sentence) -> float:
        padded = (START,) + tuple(sentence) + (END,)
        log_sum = 0.0
        for prev, cur in zip(padded, padded[1:]):
            log_sum += math.log(self.probability(prev, cur))
        return math.exp(-log_sum / (len(padded) - 1))


def fluency(sentence: Sentence, model: FluencyModel) -> float:
    """Bigram perplexity with boundary markers; lower is more fluent."""
    if not sentence:
        raise ValueError("empty sentence")
    return model.perplexity(sentence)


def remote_embed(
    sentence: Sentence,
    endpoint: str,
    expected_dim: int,
    path: str = "/embed",
    timeout: float = 10.0,
) -> np.ndarray:
    """POST the normalized sentence text to an embedding service and validate
    the returned vector's dimension. No fallback on failure; callers decide."""
    url = endpoint.rstrip("/") + path
    try:
        response = httpx.post(url, json={"sentence": sentence_text(sentence)}, timeout=timeout)
        response.raise_for_status()
    except (httpx.TransportError, httpx.HTTPStatusError) as exc:
        raise ServiceUnreachable(str(exc)) from exc
    try:
        payload = response.json()
        values = payload["embedding"]
        vec = np.array([float(x) for x in values])
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedResponse(str(exc)) from exc
    if vec.ndim != 1 or len(vec) != expected_dim:
        raise DimensionMismatch(f"expected {expected_dim} floats, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise MalformedResponse("non-finite values in embedding")
    return vec
