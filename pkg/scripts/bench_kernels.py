"""Benchmark the candidate-scoring kernels: numba-jitted vs pure numpy.

Run both paths:

    python3 scripts/bench_kernels.py
    CFEXPLAIN_DISABLE_NUMBA=1 python3 scripts/bench_kernels.py
"""

import time

import numpy as np

from cfexplain import kernels
from cfexplain.grammar import enumerate_sentences
from cfexplain.similarity import build_default_lexicon, embed, embed_batch


def bench(label, fn, repeats=5):
    fn()  # warm-up (numba compilation happens here)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    print(f"{label:38s} best {min(times)*1e3:8.2f} ms  mean {np.mean(times)*1e3:8.2f} ms")


def main():
    print(f"numba enabled: {kernels.USE_NUMBA}")
    lex = build_default_lexicon()
    sentences = enumerate_sentences(2)
    print(f"candidates: {len(sentences)} sentences, dim {lex.dim}")

    matrix = embed_batch(sentences, lex)
    query = embed(("go", "to", "the", "blue", "circle"), lex)

    bench("embed_batch (mean pooling)", lambda: embed_batch(sentences, lex))
    bench("cosine_scores (full candidate set)", lambda: kernels.cosine_scores(matrix, query))


if __name__ == "__main__":
    main()
