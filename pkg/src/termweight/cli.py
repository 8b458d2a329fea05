"""Command-line front end.

Exit codes: 0 success, 1 computation error (singular terms, degenerate
schemes, training failures), 2 I/O or configuration error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .classifier import LinearModel, TrainingError, predict_matrix
from .config import (KEYS, ConfigError, defaults, experiment_config, parse_grid,
                     parse_list, parse_text)
from .corpus import CorpusError, load_corpus
from .evaluation import (EvalReport, run_experiment, sweep, train_model)
from .io import read_text, write_atomic, write_json, write_tsv
from .textproc import (Vocabulary, VocabularyError, build_vocabulary,
                       count_documents, tokenize_document)
from .weighting import GLOBAL_SCHEMES, SCALINGS, WeightingError, WeightModel, transform

logger = logging.getLogger("termweight")

REPORT_COLUMNS = ["tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1"]
FOLD_COLUMNS = ["fold", "n_train", "n_test", "vocab_size", "b0"] + REPORT_COLUMNS
SWEEP_COLUMNS = ["axis", "value", "metric", "accuracy", "precision", "recall",
                 "f1", "status", "error"]


class InputError(Exception):
    """Bad input files: exit code 2."""


def _epilog():
    lines = ["config keys (flag form --<key> VALUE overrides the config file):"]
    width = max(len(k) for k in KEYS)
    for key, spec in KEYS.items():
        lines.append(f"  {key:<{width}}  default={spec.default!r}  {spec.help}")
    return "\n".join(lines)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file of 'key = value' lines")
    common.add_argument("--seed", type=int, help="alias for --run.seed")
    common.add_argument("--out-dir", help="alias for --run.out_dir")
    common.add_argument("-v", "--verbose", action="store_true")
    for key, spec in KEYS.items():
        common.add_argument(f"--{key}", dest=key, metavar="VALUE", default=None,
                            help=f"{spec.help} (default: {spec.default!r})")

    parser = argparse.ArgumentParser(
        prog="termweight", description="Supervised term weighting experiments.",
        epilog=_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    kw = dict(parents=[common], epilog=_epilog(),
              formatter_class=argparse.RawDescriptionHelpFormatter)
    sub.add_parser("vocab", help="build and write the training vocabulary", **kw)
    sub.add_parser("train", help="fit weights and SVM, write model files", **kw)
    sub.add_parser("eval", help="evaluate trained model files on data.test", **kw)
    sub.add_parser("experiment", help="cross-validate or train/test per config", **kw)
    sw = sub.add_parser("sweep", help="one experiment per axis value", **kw)
    axis = sw.add_mutually_exclusive_group(required=True)
    axis.add_argument("--sweep-b0", metavar="GRID", help="e.g. 0:1:0.1 or 0,0.5,1")
    axis.add_argument("--sweep-scaling", metavar="IDS", help="e.g. f0..f7 or f2,f5")
    axis.add_argument("--sweep-schemes", metavar="IDS", help="e.g. no,idf,re")
    return parser


def resolve(args):
    values = defaults()
    if args.config:
        try:
            text = read_text(args.config)
        except OSError as exc:
            raise InputError(f"cannot read config file {args.config}: {exc.strerror}") from None
        values.update(parse_text(text, args.config))
    for key in KEYS:
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.seed is not None:
        values["run.seed"] = str(args.seed)
    if args.out_dir is not None:
        values["run.out_dir"] = args.out_dir
    return values


def _load(path, values, role):
    if not path:
        raise ConfigError(f"no {role} corpus configured (data.{role})")
    return load_corpus(path, values["labels.positive"], values["labels.negative"])


def cmd_vocab(values, out):
    cfg = experiment_config(values)
    corpus = _load(values["data.train"], values, "train")
    docs = [tokenize_document(d.id, d.text, cfg.ngram_max) for d in corpus]
    vocab = build_vocabulary(docs, cfg.min_count, cfg.ngram_max)
    path = write_atomic(out / "vocab.tsv", "\n".join(vocab.to_lines()) + "\n")
    n_bi = sum(1 for f in vocab.entries if f.n == 2)
    print(f"vocabulary: {len(vocab)} features ({len(vocab) - n_bi} unigrams, "
          f"{n_bi} bigrams; min_count={cfg.min_count}) -> {path}")
    return 0


def cmd_train(values, out):
    cfg = experiment_config(values)
    corpus = _load(values["data.train"], values, "train")
    pipe = train_model(corpus, cfg)
    write_atomic(out / "vocab.tsv", "\n".join(pipe.vocab.to_lines()) + "\n")
    write_atomic(out / "weights.tsv", pipe.weights.to_text())
    write_atomic(out / "model.tsv", pipe.model.to_text())
    prov = {"config": cfg.provenance(), "scheme": pipe.weights.scheme.label(),
            "vocab_size": len(pipe.vocab), "n_documents": len(corpus),
            "n_pos": corpus.n_pos, "n_neg": corpus.n_neg,
            "chosen_b0": pipe.b0}
    if pipe.tuning is not None:
        prov["b0_tuning"] = [[r.value, r.metric] for r in pipe.tuning.rows]
    write_json(out / "train.json", prov)
    print(f"trained {prov['scheme']} on {len(corpus)} documents, "
          f"{len(pipe.vocab)} features -> {out}")
    return 0


def _read_model_dir(model_dir):
    try:
        vocab = Vocabulary.from_lines(read_text(model_dir / "vocab.tsv").splitlines())
        weights = WeightModel.from_text(read_text(model_dir / "weights.tsv"))
        model = LinearModel.from_text(read_text(model_dir / "model.tsv"))
    except OSError as exc:
        raise InputError(f"cannot read model file {exc.filename}: {exc.strerror}") from None
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed model file in {model_dir}: {exc}") from None
    if not len(vocab) == weights.vocab_size == model.dim:
        raise InputError(f"dimension mismatch: vocabulary {len(vocab)}, "
                         f"weights {weights.vocab_size}, model {model.dim}")
    return vocab, weights, model


def cmd_eval(values, out):
    cfg = experiment_config(values)
    model_dir = Path(values["model.dir"] or values["run.out_dir"])
    vocab, weights, model = _read_model_dir(model_dir)
    test = _load(values["data.test"], values, "test")
    docs = [tokenize_document(d.id, d.text, vocab.ngram_max) for d in test]
    counts = count_documents(docs, vocab)
    report = EvalReport.from_labels(test.labels,
                                    predict_matrix(model, transform(counts, weights)))
    write_tsv(out / "eval.tsv", REPORT_COLUMNS, [report.as_row()])
    write_json(out / "eval.json", {"report": report.as_row(),
                                   "model_dir": str(model_dir),
                                   "test": values["data.test"],
                                   "n_test_documents": len(test),
                                   "metric": cfg.metric})
    print(f"accuracy={report.accuracy:.4f} f1={report.f1:.4f} -> {out}")
    return 0


def cmd_experiment(values, out):
    cfg = experiment_config(values)
    rec = run_experiment(cfg)
    write_tsv(out / "experiment.tsv", FOLD_COLUMNS, rec.rows)
    write_json(out / "experiment.json", {"metrics": rec.metrics,
                                         "provenance": rec.provenance,
                                         "folds": rec.rows})
    print(f"{rec.provenance['scheme']}: {cfg.metric}={rec.metric:.4f} -> {out}")
    return 0


def cmd_sweep(values, out, args):
    cfg = experiment_config(values)
    if args.sweep_b0 is not None:
        axis, axis_values = "b0", list(parse_grid(args.sweep_b0))
    elif args.sweep_scaling is not None:
        axis, axis_values = "scaling", parse_list(args.sweep_scaling, SCALINGS)
    else:
        axis, axis_values = "scheme", parse_list(args.sweep_schemes, GLOBAL_SCHEMES)
    result = sweep(cfg, axis, axis_values)
    rows = []
    for r in result.rows:
        m = r.metrics or {}
        rows.append([axis, r.value, r.metric, m.get("accuracy"), m.get("precision"),
                     m.get("recall"), m.get("f1"), "ok" if r.ok else "failed",
                     r.error])
    write_tsv(out / "sweep.tsv", SWEEP_COLUMNS, rows)
    write_json(out / "sweep.json", {"axis": axis, "metric": cfg.metric,
                                    "optimum": result.optimum,
                                    "config": cfg.provenance(),
                                    "rows": [{"value": r.value, "metric": r.metric,
                                              "metrics": r.metrics, "error": r.error}
                                             for r in result.rows]})
    n_failed = sum(not r.ok for r in result.rows)
    print(f"sweep {axis}: {len(rows)} rows, {n_failed} failed, "
          f"optimum={result.optimum!r} -> {out}")
    if n_failed == len(rows):
        print("error: every sweep row failed", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        values = resolve(args)
        experiment_config(values)  # validate everything before any output
        out = Path(values["run.out_dir"])
        if args.command == "vocab":
            return cmd_vocab(values, out)
        if args.command == "train":
            return cmd_train(values, out)
        if args.command == "eval":
            return cmd_eval(values, out)
        if args.command == "experiment":
            return cmd_experiment(values, out)
        return cmd_sweep(values, out, args)
    except (ConfigError, InputError, CorpusError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WeightingError, TrainingError, VocabularyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
