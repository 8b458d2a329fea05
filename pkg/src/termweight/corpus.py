"""Labeled binary corpora: loaders, stratified folds and holdout splits."""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class Label(enum.IntEnum):
    NEGATIVE = -1
    POSITIVE = 1


class CorpusError(ValueError):
    """Raised for malformed or unusable corpus input."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class MalformedLineError(CorpusError):
    pass


class UnknownLabelError(CorpusError):
    def __init__(self, token, path=None, line=None):
        self.token = token
        super().__init__(f"unknown label token {token!r}", path, line)


class EmptyCorpusError(CorpusError):
    pass


class MissingClassError(CorpusError):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    label: Label
    text: str


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    n_pos: int = field(init=False)
    n_neg: int = field(init=False)

    def __post_init__(self):
        docs = tuple(self.documents)
        ids = [d.id for d in docs]
        if len(set(ids)) != len(ids):
            raise CorpusError("duplicate document ids")
        n_pos = sum(1 for d in docs if d.label is Label.POSITIVE)
        object.__setattr__(self, "documents", docs)
        object.__setattr__(self, "n_pos", n_pos)
        object.__setattr__(self, "n_neg", len(docs) - n_pos)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def labels(self):
        return np.array([int(d.label) for d in self.documents], dtype=np.int8)

    def subset(self, positions):
        return Corpus(tuple(self.documents[i] for i in positions))

    def require_both_classes(self, source=None):
        if len(self.documents) == 0:
            raise EmptyCorpusError("empty corpus", source)
        if self.n_pos == 0 or self.n_neg == 0:
            missing = "positive" if self.n_pos == 0 else "negative"
            raise MissingClassError(f"no documents in the {missing} class", source)
        return self


def _unescape(text):
    if "\\" not in text:
        return text
    out = []
    chars = iter(text)
    for ch in chars:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(chars, "")
        out.append({"t": "\t", "n": "\n", "\\": "\\"}.get(nxt, "\\" + nxt))
    return "".join(out)


def load_tsv(path, positive="pos", negative="neg"):
    """Read ``label<TAB>text`` lines into a :class:`Corpus`.

    Blank lines are skipped. Escaped ``\\t``, ``\\n`` and ``\\\\`` inside the
    text are decoded. Document ids are ``line-<n>`` with 1-based line numbers.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"corpus file not found: {path}")
    mapping = {positive: Label.POSITIVE, negative: Label.NEGATIVE}
    docs = []
    with open(path, "rb") as fh:
        raw = fh.read()
    text = raw.decode("utf-8")
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if "\t" not in line:
            raise MalformedLineError("missing tab between label and text",
                                     path, lineno)
        token, body = line.split("\t", 1)
        token = token.strip()
        if token not in mapping:
            raise UnknownLabelError(token, path, lineno)
        docs.append(Document(f"line-{lineno}", mapping[token], _unescape(body)))
    return Corpus(tuple(docs)).require_both_classes(path)


def load_class_dirs(root, positive="pos", negative="neg"):
    """One document per file under ``root/<positive>`` and ``root/<negative>``.

    Files are visited in lexicographic order of their relative path, which
    also becomes the document id.
    """
    root = Path(root)
    docs = []
    for name, label in ((positive, Label.POSITIVE), (negative, Label.NEGATIVE)):
        sub = root / name
        if not sub.is_dir():
            raise MissingClassError(f"missing class directory {name!r}", root)
        files = sorted(p for p in sub.rglob("*") if p.is_file())
        if not files:
            raise MissingClassError(f"empty class directory {name!r}", root)
        for fp in files:
            rel = fp.relative_to(root).as_posix()
            try:
                body = fp.read_bytes().decode("utf-8", errors="replace")
            except OSError as exc:
                raise CorpusError(f"unreadable file: {exc}", fp) from exc
            docs.append(Document(rel, label, body))
    return Corpus(tuple(docs)).require_both_classes(root)


def load_corpus(path, positive="pos", negative="neg"):
    """Dispatch on the path type: directory layout or TSV file."""
    if os.path.isdir(path):
        return load_class_dirs(path, positive, negative)
    return load_tsv(path, positive, negative)


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    assignment: np.ndarray

    def train_test(self, fold):
        """Positions (in corpus order) of the training and held-out parts."""
        mask = self.assignment == fold
        return np.flatnonzero(~mask), np.flatnonzero(mask)

    def __iter__(self):
        for fold in range(self.k):
            yield self.train_test(fold)


def _class_positions(corpus):
    labels = corpus.labels
    return np.flatnonzero(labels == 1), np.flatnonzero(labels == -1)


def stratified_folds(corpus, k, seed=0):
    """Shuffle each class with ``seed`` and deal it round-robin into ``k`` folds.

    The negative class continues dealing where the positive class stopped so
    overall fold sizes also stay within one of each other.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    pos, neg = _class_positions(corpus)
    if min(len(pos), len(neg)) < k:
        raise ValueError(f"k={k} exceeds the smaller class size "
                         f"({min(len(pos), len(neg))})")
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(corpus), dtype=np.int64)
    offset = 0
    for members in (pos, neg):
        shuffled = rng.permutation(members)
        assignment[shuffled] = (np.arange(len(shuffled)) + offset) % k
        offset = (offset + len(shuffled)) % k
    return FoldAssignment(k, assignment)


def holdout_split(corpus, fraction, seed=0):
    """Stratified split into ``(train, held)`` sub-corpora, order preserved."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    held = []
    for name, members in zip(("positive", "negative"), _class_positions(corpus)):
        n_held = math.floor(fraction * len(members) + 0.5)
        if n_held == 0 or n_held == len(members):
            raise ValueError(f"holdout fraction {fraction} leaves the {name} "
                             "class empty on one side")
        held.extend(rng.permutation(members)[:n_held].tolist())
    held_mask = np.zeros(len(corpus), dtype=bool)
    held_mask[held] = True
    return (corpus.subset(np.flatnonzero(~held_mask)),
            corpus.subset(np.flatnonzero(held_mask)))
