"""Metrics, cross-validation, bias tuning, experiments and parameter sweeps.

Every fit (vocabulary, contingency counts, weight model, SVM) sees training
documents only. Tokenization is a pure per-document function, so it is done
once per corpus and shared across folds and sweep rows.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import _accel
from .classifier import Dataset, TrainConfig, fit, predict_matrix
from .corpus import holdout_split, load_corpus, stratified_folds
from .textproc import build_vocabulary, count_documents, tokenize_document
from .weighting import (GLOBAL_SCHEMES, SCALINGS, GlobalScheme, LocalScheme,
                        fit_weight_model, transform)

logger = logging.getLogger(__name__)

DEFAULT_B0_GRID = tuple(round(0.1 * i, 1) for i in range(11))
METRICS = ("accuracy", "f1")


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @classmethod
    def from_labels(cls, truth, predicted):
        truth = np.asarray(truth)
        predicted = np.asarray(predicted)
        if truth.size == 0:
            raise ValueError("empty test set")
        pos_t = truth > 0
        pos_p = predicted > 0
        return cls(int(np.sum(pos_t & pos_p)), int(np.sum(~pos_t & pos_p)),
                   int(np.sum(pos_t & ~pos_p)), int(np.sum(~pos_t & ~pos_p)))

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    @property
    def accuracy(self):
        return (self.tp + self.tn) / self.total

    @property
    def precision(self):
        den = self.tp + self.fp
        return self.tp / den if den else 0.0

    @property
    def recall(self):
        den = self.tp + self.fn
        return self.tp / den if den else 0.0

    @property
    def f1(self):
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r > 0 else 0.0

    def metric(self, name):
        if name not in METRICS:
            raise ValueError(f"unknown metric {name!r}")
        return getattr(self, name)

    def as_row(self):
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
                "accuracy": self.accuracy, "precision": self.precision,
                "recall": self.recall, "f1": self.f1}


@dataclass(frozen=True)
class ExperimentConfig:
    train_path: str | None = None
    test_path: str | None = None
    positive: str = "pos"
    negative: str = "neg"
    ngram_max: int = 1
    min_count: int = 3
    local: str = "tp"
    atf_k: float = 0.5
    bm25_k1: float = 1.2
    bm25_b: float = 0.95
    scheme: str = "re"
    b0_grid: tuple = DEFAULT_B0_GRID
    scaling: str = "f5"
    normalize: bool = True
    C: float = 1.0
    tol: float = 0.1
    max_iter: int = 1000
    folds: int = 10
    holdout: float = 0.2
    metric: str = "accuracy"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b0_grid", tuple(float(b) for b in self.b0_grid))
        if not self.b0_grid:
            raise ValueError("b0 grid must not be empty")
        if any(not 0.0 <= b <= 1.0 for b in self.b0_grid):
            raise ValueError("b0 grid values must lie in [0, 1]")
        if self.scheme not in GLOBAL_SCHEMES:
            raise ValueError(f"unknown global scheme {self.scheme!r}")
        if self.scaling not in SCALINGS:
            raise ValueError(f"unknown scaling function {self.scaling!r}")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if self.ngram_max not in (1, 2):
            raise ValueError("ngram_max must be 1 or 2")
        if self.test_path is None and self.folds < 2:
            raise ValueError("cross-validation needs at least 2 folds")
        if not 0.0 < self.holdout < 1.0:
            raise ValueError("holdout fraction must lie in (0, 1)")
        self.local_scheme()
        self.train_config()

    def local_scheme(self):
        return LocalScheme(self.local, self.atf_k, self.bm25_k1, self.bm25_b)

    def train_config(self):
        return TrainConfig(self.C, self.tol, self.max_iter, self.seed)

    def global_scheme(self, b0=None):
        if self.scheme == "re":
            return GlobalScheme("re", b0=self.b0_grid[0] if b0 is None else b0)
        if self.scheme == "scaled_x":
            return GlobalScheme("scaled_x", scaling=self.scaling)
        return GlobalScheme(self.scheme)

    def provenance(self):
        out = asdict(self)
        out["b0_grid"] = list(self.b0_grid)
        out["mode"] = "split" if self.test_path is not None else "cv"
        return out


@dataclass(frozen=True)
class SweepRow:
    value: object
    metric: float | None
    metrics: dict | None = None
    error: str | None = None

    @property
    def ok(self):
        return self.error is None


@dataclass(frozen=True)
class SweepResult:
    axis: str
    metric_name: str
    rows: tuple
    optimum: object

    def table(self):
        return [(r.value, r.metric) for r in self.rows]


@dataclass
class FittedPipeline:
    vocab: object
    weights: object
    model: object
    b0: float | None = None
    tuning: SweepResult | None = None

    def score(self, docs, labels):
        counts = count_documents(docs, self.vocab)
        rows = transform(counts, self.weights)
        return EvalReport.from_labels(labels, predict_matrix(self.model, rows))


class TokenCache:
    """Tokenized documents, keyed by the (hashable) document itself.

    Train and test corpora loaded from different files may reuse ids, so the
    key is the whole document rather than its id.
    """

    def __init__(self, ngram_max):
        self.ngram_max = ngram_max
        self._docs = {}

    def get(self, corpus):
        out = []
        for doc in corpus:
            tok = self._docs.get(doc)
            if tok is None:
                tok = tokenize_document(doc.id, doc.text, self.ngram_max)
                self._docs[doc] = tok
            out.append(tok)
        return out


def fit_pipeline(train, cfg, scheme, cache=None):
    """Vocabulary, weight model and SVM fitted on ``train`` only."""
    cache = cache or TokenCache(cfg.ngram_max)
    docs = cache.get(train)
    vocab = build_vocabulary(docs, cfg.min_count, cfg.ngram_max)
    counts = count_documents(docs, vocab, train.labels)
    weights = fit_weight_model(counts, vocab, cfg.local_scheme(), scheme,
                               cfg.normalize)
    rows = transform(counts, weights)
    result = fit(Dataset(rows, counts.labels, len(vocab)), cfg.train_config())
    return FittedPipeline(vocab, weights, result.model,
                          b0=scheme.b0 if scheme.id == "re" else None)


def evaluate(pipeline, test, cache=None):
    cache = cache or TokenCache(pipeline.vocab.ngram_max)
    return pipeline.score(cache.get(test), test.labels)


def _argmax(values, metrics, prefer_larger):
    best = None
    for v, m in zip(values, metrics):
        if m is None:
            continue
        if best is None or m > best[1] or (prefer_larger and m == best[1] and v > best[0]):
            best = (v, m)
    return None if best is None else best[0]


def tune_b0(train, cfg, cache=None):
    """Choose b0 on a stratified holdout of ``train``, then refit on all of it.

    Ties in the held-out metric go to the larger b0.
    """
    if cfg.scheme != "re":
        raise ValueError("b0 tuning applies to the 're' scheme only")
    cache = cache or TokenCache(cfg.ngram_max)
    grid = cfg.b0_grid
    if len(grid) == 1:
        chosen = grid[0]
        tuning = SweepResult("b0", cfg.metric, (), chosen)
    else:
        fit_part, held = holdout_split(train, cfg.holdout, cfg.seed)
        rows = []
        for b0 in grid:
            pipe = fit_pipeline(fit_part, cfg, GlobalScheme("re", b0=b0), cache)
            rep = evaluate(pipe, held, cache)
            rows.append(SweepRow(b0, rep.metric(cfg.metric), rep.as_row()))
        chosen = _argmax(grid, [r.metric for r in rows], prefer_larger=True)
        tuning = SweepResult("b0", cfg.metric, tuple(rows), chosen)
    final = fit_pipeline(train, cfg, GlobalScheme("re", b0=chosen), cache)
    final.tuning = tuning
    return chosen, tuning, final


def train_model(train, cfg, cache=None):
    """Fit the configured pipeline, tuning b0 first when the scheme is 're'."""
    if cfg.scheme == "re":
        return tune_b0(train, cfg, cache)[2]
    return fit_pipeline(train, cfg, cfg.global_scheme(), cache)


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    vocab_size: int
    b0: float | None
    report: EvalReport
    pipeline: FittedPipeline | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CVResult:
    folds: tuple
    metric_name: str

    def mean(self, name):
        return math.fsum(getattr(f.report, name) for f in self.folds) / len(self.folds)

    @property
    def accuracy(self):
        return self.mean("accuracy")

    @property
    def f1(self):
        return self.mean("f1")

    @property
    def metric(self):
        return self.mean(self.metric_name)


def cross_validate(cfg, corpus=None, cache=None, keep_models=False):
    corpus = corpus if corpus is not None else _load(cfg.train_path, cfg)
    cache = cache or TokenCache(cfg.ngram_max)
    folds = stratified_folds(corpus, cfg.folds, cfg.seed)
    results = []
    for k, (train_pos, test_pos) in enumerate(folds):
        train, test = corpus.subset(train_pos), corpus.subset(test_pos)
        pipe = train_model(train, cfg, cache)
        rep = evaluate(pipe, test, cache)
        results.append(FoldResult(k, len(train), len(test), len(pipe.vocab),
                                  pipe.b0, rep, pipe if keep_models else None))
        logger.debug("fold %d: %s=%.4f", k, cfg.metric, rep.metric(cfg.metric))
    return CVResult(tuple(results), cfg.metric)


def _load(path, cfg):
    if path is None:
        raise ValueError("no corpus path configured")
    return load_corpus(path, cfg.positive, cfg.negative)


@dataclass
class ExperimentRecord:
    metrics: dict
    rows: list
    provenance: dict
    timings: dict = field(default_factory=dict)

    @property
    def metric(self):
        return self.metrics[self.provenance["config"]["metric"]]


def run_experiment(cfg, corpus=None, test_corpus=None, cache=None):
    """Cross-validate, or train/test on a fixed split when a test set is given.

    The record's ``timings`` are wall-clock measurements and are kept out of
    the provenance block so reports stay byte-reproducible.
    """
    t0 = time.perf_counter()
    corpus = corpus if corpus is not None else _load(cfg.train_path, cfg)
    if test_corpus is None and cfg.test_path is not None:
        test_corpus = _load(cfg.test_path, cfg)
    cache = cache or TokenCache(cfg.ngram_max)
    t_load = time.perf_counter()
    if test_corpus is not None:
        pipe = train_model(corpus, cfg, cache)
        rep = evaluate(pipe, test_corpus, cache)
        folds = (FoldResult(0, len(corpus), len(test_corpus), len(pipe.vocab),
                            pipe.b0, rep),)
        tuning = pipe.tuning
    else:
        folds = cross_validate(cfg, corpus, cache).folds
        tuning = None
    t_done = time.perf_counter()
    cv = CVResult(folds, cfg.metric)
    metrics = {name: cv.mean(name) for name in ("accuracy", "precision", "recall", "f1")}
    rows = [dict(fold=f.fold, n_train=f.n_train, n_test=f.n_test,
                 vocab_size=f.vocab_size, b0=f.b0, **f.report.as_row())
            for f in folds]
    provenance = {
        "config": cfg.provenance(),
        "scheme": cfg.global_scheme(
            folds[0].b0 if cfg.scheme == "re" else None).label(),
        "n_documents": len(corpus),
        "n_pos": corpus.n_pos,
        "n_neg": corpus.n_neg,
        "n_test_documents": None if test_corpus is None else len(test_corpus),
        "vocab_sizes": [f.vocab_size for f in folds],
        "chosen_b0": [f.b0 for f in folds] if cfg.scheme == "re" else None,
        "backend": _accel.backend(),
    }
    if tuning is not None and tuning.rows:
        provenance["b0_tuning"] = [[r.value, r.metric] for r in tuning.rows]
    timings = {"load_s": t_load - t0, "fit_eval_s": t_done - t_load,
               "total_s": t_done - t0}
    logger.info("experiment %s: %s=%.4f (%.2fs)", provenance["scheme"],
                cfg.metric, metrics[cfg.metric], timings["total_s"])
    return ExperimentRecord(metrics, rows, provenance, timings)


SWEEP_AXES = ("b0", "scaling", "scheme")


def axis_config(cfg, axis, value):
    if axis == "b0":
        return replace(cfg, scheme="re", b0_grid=(float(value),))
    if axis == "scaling":
        return replace(cfg, scheme="scaled_x", scaling=value)
    if axis == "scheme":
        return replace(cfg, scheme=value)
    raise ValueError(f"unknown sweep axis {axis!r}")


def sweep(cfg, axis, values, corpus=None, test_corpus=None):
    """One experiment per axis value, everything else (seed, splits) fixed.

    Rows whose experiment raises a weighting or training error are kept with
    the error message and no metric. The optimum is the argmax of the metric;
    ties go to the larger b0 on the b0 axis and to the earlier value otherwise.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}")
    values = list(values)
    if not values:
        raise ValueError("sweep axis has no values")
    corpus = corpus if corpus is not None else _load(cfg.train_path, cfg)
    if test_corpus is None and cfg.test_path is not None:
        test_corpus = _load(cfg.test_path, cfg)
    cache = TokenCache(cfg.ngram_max)
    rows = []
    for value in values:
        try:
            row_cfg = axis_config(cfg, axis, value)
            rec = run_experiment(row_cfg, corpus, test_corpus, cache)
        except ValueError as exc:
            logger.warning("sweep %s=%s failed: %s", axis, value, exc)
            rows.append(SweepRow(value, None, None, str(exc)))
            continue
        rows.append(SweepRow(value, rec.metric, dict(rec.metrics)))
    optimum = _argmax(values, [r.metric for r in rows], prefer_larger=axis == "b0")
    return SweepResult(axis, cfg.metric, tuple(rows), optimum)
