"""Time the compiled kernels against the pure-Python fallback.

Runs the two hot paths (pairwise token edit distance, sparse dot products)
through both implementations on identical random inputs and prints a
speedup table. When the compiled extension is not built, only the fallback
column is reported.

    python benchmarks/bench_backends.py [--docs N] [--doc-len L] ...
"""

import argparse
import random
import statistics
import time

import numpy as np

from medoidknn._kernels import _pyimpl, pack_sequences

try:
    from medoidknn._kernels import _speedups
except ImportError:
    _speedups = None


def make_sequences(rng, n_docs, doc_len, alphabet):
    return [
        [rng.randrange(alphabet) for _ in range(rng.randint(doc_len // 2, doc_len))]
        for _ in range(n_docs)
    ]


def make_vectors(rng, n_pairs, universe, length):
    pairs = []
    for _ in range(n_pairs):
        ids_a = sorted(rng.sample(range(universe), length))
        ids_b = sorted(rng.sample(range(universe), length))
        pairs.append(
            (
                np.array(ids_a, dtype=np.int32),
                np.array([rng.uniform(0.1, 5.0) for _ in ids_a], dtype=np.float64),
                np.array(ids_b, dtype=np.int32),
                np.array([rng.uniform(0.1, 5.0) for _ in ids_b], dtype=np.float64),
            )
        )
    return pairs


def timed(fn, repeats):
    samples = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - started)
    return statistics.fmean(samples)


def bench_pairwise(impl, seqs, repeats):
    flat, offsets = pack_sequences(seqs)
    n = len(seqs)

    def run():
        out = np.zeros((n, n), dtype=np.float64)
        impl.pairwise_levenshtein(flat, offsets, out, 0, n)

    return timed(run, repeats)


def bench_sparse(impl, pairs, repeats):
    def run():
        acc = 0.0
        for ids_a, vals_a, ids_b, vals_b in pairs:
            acc += impl.sparse_dot(ids_a, vals_a, ids_b, vals_b)
            acc += impl.sparse_sqnorm(vals_a)
        return acc

    return timed(run, repeats)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=120,
                        help="documents for the pairwise benchmark")
    parser.add_argument("--doc-len", type=int, default=120,
                        help="maximum tokens per document")
    parser.add_argument("--alphabet", type=int, default=800,
                        help="distinct token ids")
    parser.add_argument("--pairs", type=int, default=4000,
                        help="vector pairs for the sparse benchmark")
    parser.add_argument("--vector-len", type=int, default=40,
                        help="nonzero entries per vector")
    parser.add_argument("--repeats", type=int, default=3,
                        help="repetitions per measurement")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    seqs = make_sequences(rng, args.docs, args.doc_len, args.alphabet)
    pairs = make_vectors(rng, args.pairs, args.alphabet, args.vector_len)

    workloads = [
        (
            f"pairwise edit distance ({args.docs} docs, <= {args.doc_len} tokens)",
            lambda impl: bench_pairwise(impl, seqs, args.repeats),
        ),
        (
            f"sparse dot + sqnorm ({args.pairs} vector pairs)",
            lambda impl: bench_sparse(impl, pairs, args.repeats),
        ),
    ]

    rows = []
    for name, runner in workloads:
        pure = runner(_pyimpl)
        if _speedups is not None:
            fast = runner(_speedups)
            rows.append((name, f"{pure:.4f}s", f"{fast:.4f}s", f"{pure / fast:.1f}x"))
        else:
            rows.append((name, f"{pure:.4f}s", "not built", ""))

    header = ("workload", "pure python", "compiled", "speedup")
    table = [header, *rows]
    widths = [max(len(row[i]) for row in table) for i in range(4)]
    for row in table:
        print(
            "  ".join(
                cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
                for i, cell in enumerate(row)
            ).rstrip()
        )
    if _speedups is None:
        print("\ncompiled extension unavailable; rebuild with a C compiler "
              "to compare backends")


if __name__ == "__main__":
    main()
