"""Time the numba and numpy paths of the two hot kernels.

Usage: python benchmarks/bench_kernels.py [--docs N] [--repeat R]

Both paths are run on the same synthetic count matrix; the outputs are
checked for agreement before timings are printed. The first numba call
(compilation or cache load) is excluded.
"""
import argparse
import time

import numpy as np

from termweight import _accel
from termweight._kernels import LOCAL_CODES, dual_cd, weigh_rows
from termweight.synthetic import generate_corpus
from termweight.textproc import build_vocabulary, count_documents, tokenize_document


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=2000, help="documents per class")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    corpus = generate_corpus(args.docs, p_specific=0.1, seed=0)
    docs = [tokenize_document(d.id, d.text, 1) for d in corpus]
    vocab = build_vocabulary(docs, 3, 1)
    counts = count_documents(docs, vocab, corpus.labels)
    tf = counts.tf
    g = np.random.default_rng(0).random(counts.dim)
    avg_dl = float(counts.dl.mean())
    print(f"{len(corpus)} documents, {counts.dim} features, {tf.nnz} nonzeros")

    if not _accel.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return

    def rows(use_numba):
        return weigh_rows(tf.indptr, tf.indices, tf.data, counts.max_tf, counts.dl, g,
                          LOCAL_CODES["btf"], 0.5, 1.2, 0.95, avg_dl, True,
                          use_numba=use_numba)

    rows(True)
    t_nb, v_nb = best_of(args.repeat, lambda: rows(True))
    t_np, v_np = best_of(args.repeat, lambda: rows(False))
    assert np.allclose(v_nb, v_np, rtol=1e-12, atol=1e-15)
    print(f"weigh_rows  numba {t_nb * 1e3:9.2f} ms   numpy {t_np * 1e3:9.2f} ms   "
          f"speedup {t_np / t_nb:6.1f}x")

    data = v_nb
    y = corpus.labels.astype(np.float64)

    def svm(use_numba):
        return dual_cd(tf.indptr, tf.indices, data, y, counts.dim, 1.0, 0.1, 1000, 0,
                       use_numba=use_numba)

    svm(True)
    t_nb, s_nb = best_of(args.repeat, lambda: svm(True))
    t_np, s_np = best_of(max(1, args.repeat // 2), lambda: svm(False))
    assert s_nb[2] == s_np[2] and np.allclose(s_nb[0], s_np[0], rtol=1e-9, atol=1e-12)
    print(f"dual_cd     numba {t_nb * 1e3:9.2f} ms   numpy {t_np * 1e3:9.2f} ms   "
          f"speedup {t_np / t_nb:6.1f}x   ({s_nb[2]} passes)")


if __name__ == "__main__":
    main()
