"""Tokenization, n-gram features, vocabulary and raw term counts."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

# alphanumeric runs, apostrophes allowed only between alphanumerics
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")

UNIGRAM = 1
BIGRAM = 2


class FeatureKey(NamedTuple):
    """An n-gram feature; sorts by (order, tokens)."""

    n: int
    tokens: tuple

    @property
    def kind(self):
        return "unigram" if self.n == UNIGRAM else "bigram"

    def __str__(self):
        return " ".join(self.tokens)


def unigram(token):
    return FeatureKey(UNIGRAM, (token,))


def bigram(first, second):
    return FeatureKey(BIGRAM, (first, second))


def tokenize(text):
    return [m.group(0) for m in _TOKEN_RE.finditer(text.lower())]


def extract_features(tokens, ngram_max=1):
    if ngram_max not in (1, 2):
        raise ValueError("ngram_max must be 1 or 2")
    feats = [unigram(t) for t in tokens]
    if ngram_max == 2:
        feats.extend(bigram(a, b) for a, b in zip(tokens, tokens[1:]))
    return feats


@dataclass(frozen=True)
class TokenizedDoc:
    doc_id: str
    features: tuple
    dl: int


def tokenize_document(doc_id, text, ngram_max=1):
    tokens = tokenize(text)
    return TokenizedDoc(doc_id, tuple(extract_features(tokens, ngram_max)),
                        len(tokens))


class VocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    entries: tuple
    min_count: int
    ngram_max: int

    def __post_init__(self):
        object.__setattr__(self, "_index",
                           {f: i for i, f in enumerate(self.entries)})

    def __len__(self):
        return len(self.entries)

    def __contains__(self, feature):
        return feature in self._index

    def index(self, feature):
        return self._index[feature]

    def get(self, feature, default=None):
        return self._index.get(feature, default)

    def to_lines(self):
        return [f"{i}\t{f.kind}\t{f}" for i, f in enumerate(self.entries)]

    @classmethod
    def from_lines(cls, lines, min_count=1, ngram_max=None):
        entries = []
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3 or parts[1] not in ("unigram", "bigram"):
                raise VocabularyError(f"line {lineno}: malformed vocabulary entry")
            idx, kind, text = parts
            if int(idx) != len(entries):
                raise VocabularyError(f"line {lineno}: index {idx} is not dense")
            toks = tuple(text.split(" "))
            n = UNIGRAM if kind == "unigram" else BIGRAM
            if len(toks) != n:
                raise VocabularyError(f"line {lineno}: token count does not match kind")
            entries.append(FeatureKey(n, toks))
        if ngram_max is None:
            ngram_max = max((f.n for f in entries), default=1)
        return cls(tuple(entries), min_count, ngram_max)


def feature_totals(train_docs):
    totals = Counter()
    for doc in train_docs:
        totals.update(doc.features)
    return totals


def build_vocabulary(train_docs, min_count=3, ngram_max=1):
    """Keep features whose total occurrence count over ``train_docs`` reaches ``min_count``."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    totals = feature_totals(train_docs)
    kept = sorted(f for f, n in totals.items()
                  if n >= min_count and f.n <= ngram_max)
    if not kept:
        raise VocabularyError(f"no feature occurs at least {min_count} times")
    return Vocabulary(tuple(kept), min_count, ngram_max)


@dataclass(frozen=True)
class CountedDoc:
    """In-vocabulary raw frequencies of one document (sorted indices)."""

    indices: np.ndarray
    tf: np.ndarray
    max_tf: int
    dl: int

    def as_dict(self):
        return dict(zip(self.indices.tolist(), self.tf.tolist()))


def count_document(doc, vocab):
    counts = Counter()
    for f in doc.features:
        i = vocab.get(f)
        if i is not None:
            counts[i] += 1
    idx = np.array(sorted(counts), dtype=np.int64)
    tf = np.array([counts[i] for i in idx.tolist()], dtype=np.int64)
    return CountedDoc(idx, tf, int(tf.max()) if tf.size else 0, doc.dl)


@dataclass(frozen=True)
class CountMatrix:
    """Raw term frequencies of many documents as CSR plus per-row metadata."""

    tf: sp.csr_matrix
    max_tf: np.ndarray
    dl: np.ndarray
    labels: np.ndarray | None = None

    @property
    def n_docs(self):
        return self.tf.shape[0]

    @property
    def dim(self):
        return self.tf.shape[1]

    def row(self, i):
        start, stop = self.tf.indptr[i], self.tf.indptr[i + 1]
        return CountedDoc(self.tf.indices[start:stop].astype(np.int64),
                          self.tf.data[start:stop].astype(np.int64),
                          int(self.max_tf[i]), int(self.dl[i]))


def count_documents(docs, vocab, labels=None):
    counted = [count_document(d, vocab) for d in docs]
    indptr = np.zeros(len(counted) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([c.indices.size for c in counted])
    indices = (np.concatenate([c.indices for c in counted])
               if counted else np.zeros(0, dtype=np.int64))
    data = (np.concatenate([c.tf for c in counted])
            if counted else np.zeros(0, dtype=np.int64))
    tf = sp.csr_matrix((data.astype(np.float64), indices, indptr),
                       shape=(len(counted), len(vocab)))
    if labels is not None:
        labels = np.asarray(labels, dtype=np.int8)
        if labels.shape[0] != len(counted):
            raise ValueError("labels and documents differ in length")
    return CountMatrix(tf,
                       np.array([c.max_tf for c in counted], dtype=np.int64),
                       np.array([c.dl for c in counted], dtype=np.int64),
                       labels)
