"""Test accuracy as a function of training-set size, one column per scheme.

Usage:
    python scripts/data_size_curve.py [--train PATH --test PATH] [--schemes no,idf,re]
                                      [--fractions 0.1,0.2,0.5,1] [--seed 0]

Without --train/--test a seeded synthetic train/test pair is generated.
For each fraction a class-stratified random subset of the training corpus
is drawn (nested across fractions) and every scheme is trained on it and
scored on the full test corpus. Output is a TSV table on stdout.
"""
import argparse
import sys

import numpy as np

from termweight.corpus import load_corpus
from termweight.evaluation import ExperimentConfig, TokenCache, run_experiment
from termweight.synthetic import generate_corpus


def nested_subset(corpus, fraction, seed):
    rng = np.random.default_rng(seed)
    keep = []
    for label in (1, -1):
        idx = np.flatnonzero(corpus.labels == label)
        idx = idx[rng.permutation(idx.size)]
        keep.extend(idx[:max(1, int(fraction * idx.size + 0.5))].tolist())
    return corpus.subset(sorted(keep))


def main(argv=None):
    ap = argparse.ArgumentParser(description="accuracy vs training-set size")
    ap.add_argument("--train")
    ap.add_argument("--test")
    ap.add_argument("--positive", default="pos")
    ap.add_argument("--negative", default="neg")
    ap.add_argument("--local", default="tp")
    ap.add_argument("--schemes", default="no,idf,rf,re")
    ap.add_argument("--fractions", default="0.05,0.1,0.2,0.4,0.7,1.0")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if bool(args.train) != bool(args.test):
        ap.error("--train and --test go together")
    if args.train:
        train = load_corpus(args.train, args.positive, args.negative)
        test = load_corpus(args.test, args.positive, args.negative)
    else:
        train = generate_corpus(500, p_specific=0.05, seed=args.seed)
        test = generate_corpus(500, p_specific=0.05, seed=args.seed + 1)

    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    fractions = [float(f) for f in args.fractions.split(",")]
    cache = TokenCache(1)
    print("\t".join(["fraction", "n_train"] + schemes))
    for frac in fractions:
        sub = nested_subset(train, frac, args.seed)
        cells = []
        for scheme in schemes:
            cfg = ExperimentConfig(local=args.local, scheme=scheme, seed=args.seed)
            try:
                rec = run_experiment(cfg, sub, test, cache)
                cells.append(f"{rec.metrics['accuracy']:.4f}")
            except Exception as exc:  # a scheme may be undefined on tiny subsets
                print(f"# {scheme} at {frac}: {exc}", file=sys.stderr)
                cells.append("nan")
        print("\t".join([f"{frac:g}", str(len(sub))] + cells), flush=True)


if __name__ == "__main__":
    main()
