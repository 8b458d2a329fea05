"""L2-regularized L2-loss linear SVM trained by dual coordinate descent.

The primal problem is

    min_w  0.5 * w.w + C * sum_i max(0, 1 - y_i w.x_i)^2

with no intercept. The dual has box constraints alpha_i >= 0 and a diagonal
shift of 1 / (2C); each coordinate step solves the one-variable subproblem
exactly, so the dual objective never increases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .corpus import Label
from .weighting import SparseVector


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    C: float = 1.0
    tol: float = 0.1
    max_iter: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("C must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class Dataset:
    rows: sp.csr_matrix
    labels: np.ndarray
    dim: int

    def __post_init__(self):
        rows = sp.csr_matrix(self.rows, dtype=np.float64)
        rows.sort_indices()
        labels = np.asarray(self.labels, dtype=np.float64)
        if rows.shape[0] != labels.shape[0]:
            raise ValueError("rows and labels differ in length")
        if rows.shape[1] > self.dim:
            raise ValueError("row indices exceed dim")
        if rows.shape[1] < self.dim:
            rows = sp.csr_matrix((rows.data, rows.indices, rows.indptr),
                                 shape=(rows.shape[0], self.dim))
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be +1 or -1")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_dense(cls, X, y):
        X = np.asarray(X, dtype=np.float64)
        return cls(sp.csr_matrix(X), np.asarray(y), X.shape[1])

    @classmethod
    def from_vectors(cls, vectors, labels, dim):
        indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(v) for v in vectors])
        idx = np.concatenate([v.indices for v in vectors]) if vectors else []
        val = np.concatenate([v.values for v in vectors]) if vectors else []
        rows = sp.csr_matrix((val, idx, indptr), shape=(len(vectors), dim))
        return cls(rows, np.asarray(labels), dim)


@dataclass(frozen=True)
class LinearModel:
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        object.__setattr__(self, "w", w)

    @property
    def dim(self):
        return self.w.shape[0]

    def to_text(self):
        lines = [f"dim\t{self.dim}"]
        lines += [f"{i}\t{float(self.w[i])!r}" for i in np.flatnonzero(self.w)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("dim\t"):
            raise ValueError("model file must start with a 'dim' line")
        dim = int(lines[0].split("\t")[1])
        w = np.zeros(dim)
        for ln in lines[1:]:
            idx, val = ln.split("\t")
            i = int(idx)
            if not 0 <= i < dim:
                raise ValueError(f"weight index {i} outside dim {dim}")
            w[i] = float(val)
        return cls(w)


@dataclass(frozen=True)
class TrainResult:
    model: LinearModel
    alpha: np.ndarray
    n_iter: int
    violation: float


def primal_objective(w, data, C):
    margins = 1.0 - data.labels * (data.rows @ w)
    return 0.5 * float(w @ w) + C * float(np.sum(np.maximum(margins, 0.0) ** 2))


def dual_objective(alpha, data, C):
    """0.5 * ||sum_i alpha_i y_i x_i||^2 + sum_i alpha_i^2 / (4C) - sum_i alpha_i."""
    w = data.rows.T @ (alpha * data.labels)
    return (0.5 * float(w @ w) + float(alpha @ alpha) / (4.0 * C)
            - float(alpha.sum()))


def _check(data):
    if not (np.any(data.labels > 0) and np.any(data.labels < 0)):
        raise TrainingError("training data must contain both classes")
    if not np.all(np.isfinite(data.rows.data)):
        raise TrainingError("feature values must be finite")


def fit(data, cfg=TrainConfig(), use_numba=None):
    """Train and also return the dual solution and convergence info."""
    _check(data)
    rows = data.rows
    w, alpha, n_iter, violation = _kernels.dual_cd(
        rows.indptr, rows.indices, rows.data, data.labels, data.dim, cfg.C,
        cfg.tol, cfg.max_iter, cfg.seed, use_numba=use_numba)
    return TrainResult(LinearModel(w), alpha, int(n_iter), float(violation))


def train(data, cfg=TrainConfig()):
    return fit(data, cfg).model


def decision(model, x):
    if isinstance(x, SparseVector):
        idx, val = x.indices, x.values
    else:
        idx = np.fromiter(x.keys(), dtype=np.int64, count=len(x))
        val = np.fromiter(x.values(), dtype=np.float64, count=len(x))
    if idx.size and (idx.min() < 0 or idx.max() >= model.dim):
        raise IndexError("feature index outside the model dimension")
    return float(np.dot(model.w[idx], val)) if idx.size else 0.0


def decision_matrix(model, rows):
    if rows.shape[1] != model.dim:
        raise ValueError(f"rows have {rows.shape[1]} columns, model {model.dim}")
    return np.asarray(rows @ model.w, dtype=np.float64)


def predict(model, x):
    """Positive when the decision value is >= 0 (ties go to Positive)."""
    return Label.POSITIVE if decision(model, x) >= 0.0 else Label.NEGATIVE


def predict_matrix(model, rows):
    return np.where(decision_matrix(model, rows) >= 0.0, 1, -1).astype(np.int8)
