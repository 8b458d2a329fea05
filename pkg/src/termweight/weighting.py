"""Local and global term weighting schemes and document vectorization.

Global weights are computed from per-term contingency counts over the
training collection:

    a  positive documents containing the term     b = N+ - a
    c  negative documents containing the term     d = N- - c

All global schemes are evaluated on whole arrays of terms at once; the scalar
helpers (:func:`global_weight`, :func:`entropy_h`, ...) wrap the array forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels

LOCAL_SCHEMES = ("tf", "tp", "atf", "ltf", "btf")
GLOBAL_SCHEMES = ("no", "idf", "pidf", "bidf", "ig", "gr", "mi", "mi_prime",
                  "chi", "didf", "dsidf", "dsidf_legacy", "dspidf", "dbidf",
                  "rf", "ne", "re", "scaled_x")
SCALINGS = ("f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7")
DELTA_SCHEMES = ("didf", "dsidf", "dspidf", "dbidf")


class WeightingError(ValueError):
    """A global scheme is undefined for some term."""


class SingularTermError(WeightingError):
    def __init__(self, scheme, positions, terms=None):
        self.scheme = scheme
        self.positions = list(positions)
        self.terms = terms
        shown = terms if terms is not None else self.positions
        preview = ", ".join(repr(str(t)) if terms is not None else str(t)
                            for t in list(shown)[:5])
        more = "" if len(self.positions) <= 5 else f" (+{len(self.positions) - 5} more)"
        super().__init__(f"{scheme}: singular term(s) with a zero class "
                         f"count: {preview}{more}")


class DegenerateArgumentError(WeightingError):
    def __init__(self, scheme, positions, reason, terms=None):
        self.scheme = scheme
        self.positions = list(positions)
        self.reason = reason
        self.terms = terms
        shown = terms if terms is not None else self.positions
        preview = ", ".join(repr(str(t)) if terms is not None else str(t)
                            for t in list(shown)[:5])
        super().__init__(f"{scheme}: {reason}: {preview}")


# --------------------------------------------------------------------------
# value types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalScheme:
    id: str = "tf"
    k: float = 0.5
    k1: float = 1.2
    b: float = 0.95

    def __post_init__(self):
        if self.id not in LOCAL_SCHEMES:
            raise ValueError(f"unknown local scheme {self.id!r}")
        if not 0.0 <= self.k <= 1.0:
            raise ValueError("atf k must lie in [0, 1]")
        if self.k1 <= 0.0:
            raise ValueError("btf k1 must be positive")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("btf b must lie in [0, 1]")


@dataclass(frozen=True)
class GlobalScheme:
    id: str = "no"
    b0: float | None = None
    scaling: str | None = None

    def __post_init__(self):
        if self.id not in GLOBAL_SCHEMES:
            raise ValueError(f"unknown global scheme {self.id!r}")
        if (self.b0 is not None) != (self.id == "re"):
            raise ValueError("b0 is required for 're' and only for 're'")
        if self.b0 is not None and not 0.0 <= self.b0 <= 1.0:
            raise ValueError("b0 must lie in [0, 1]")
        if (self.scaling is not None) != (self.id == "scaled_x"):
            raise ValueError("scaling is required for 'scaled_x' and only for it")
        if self.scaling is not None and self.scaling not in SCALINGS:
            raise ValueError(f"unknown scaling function {self.scaling!r}")

    def label(self):
        if self.id == "re":
            return f"re(b0={self.b0!r})"
        if self.id == "scaled_x":
            return f"x:{self.scaling}"
        return self.id


@dataclass(frozen=True)
class CollectionStats:
    N: int
    n_pos: int
    n_neg: int
    avg_dl: float

    def __post_init__(self):
        if self.N != self.n_pos + self.n_neg:
            raise ValueError("N must equal n_pos + n_neg")
        if self.n_pos < 1 or self.n_neg < 1:
            raise ValueError("both classes need at least one document")


@dataclass(frozen=True)
class TermContingency:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("contingency counts must be non-negative")

    @classmethod
    def from_counts(cls, a, c, n_pos, n_neg):
        return cls(a, n_pos - a, c, n_neg - c)


@dataclass(frozen=True)
class ContingencyTable:
    """Per-term a and c counts, aligned with vocabulary indices."""

    a: np.ndarray
    c: np.ndarray
    n_pos: int
    n_neg: int

    @property
    def b(self):
        return self.n_pos - self.a

    @property
    def d(self):
        return self.n_neg - self.c

    def __len__(self):
        return self.a.shape[0]

    def term(self, i):
        return TermContingency.from_counts(int(self.a[i]), int(self.c[i]),
                                           self.n_pos, self.n_neg)


# --------------------------------------------------------------------------
# local weights
# --------------------------------------------------------------------------

def local_weight(scheme, tf, max_tf=None, dl=None, avg_dl=None):
    sid = scheme.id
    if sid == "tf":
        return float(tf)
    if sid == "tp":
        return 1.0 if tf > 0 else 0.0
    if sid == "atf":
        if tf == 0:
            return scheme.k if max_tf else 0.0
        return scheme.k + (1.0 - scheme.k) * tf / max_tf
    if sid == "ltf":
        return math.log2(1.0 + tf)
    if avg_dl is None or avg_dl <= 0:
        raise ValueError("btf needs a positive average document length")
    k1, b = scheme.k1, scheme.b
    return (k1 + 1.0) * tf / (k1 * ((1.0 - b) + b * dl / avg_dl) + tf)


# --------------------------------------------------------------------------
# imbalance ratio, scaling, entropy
# --------------------------------------------------------------------------

def _as_f64(*arrays):
    return [np.asarray(x, dtype=np.float64) for x in arrays]


def imbalance_ratio(a, c, n_pos, n_neg):
    """x = max(r+, r-) / min(r+, r-) with r+ = (a+1)/N+, r- = (c+1)/N-."""
    a, c = _as_f64(a, c)
    r_pos = (a + 1.0) / n_pos
    r_neg = (c + 1.0) / n_neg
    return np.maximum(r_pos, r_neg) / np.minimum(r_pos, r_neg)


def imbalance_x(t, s):
    return float(imbalance_ratio(t.a, t.c, s.n_pos, s.n_neg))


_SCALE_FUNCS = {
    "f0": lambda x: x,
    "f1": lambda x: x * x,
    "f2": np.sqrt,
    "f3": np.cbrt,
    "f4": np.log2,
    "f5": lambda x: 1.0 / (0.1 + 1.0 / x),
    "f6": lambda x: 1.0 / (0.05 + 1.0 / x),
    "f7": lambda x: np.power(x, 1.0 / 6.0),
}


def scale_array(fid, x):
    if fid not in _SCALE_FUNCS:
        raise ValueError(f"unknown scaling function {fid!r}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 1.0) or not np.all(np.isfinite(x)):
        raise ValueError("scaling functions are defined for finite x >= 1")
    return _SCALE_FUNCS[fid](x)


def scale(fid, x):
    return float(scale_array(fid, x))


def _xlog2x(p):
    safe = np.where(p > 0.0, p, 1.0)
    return np.where(p > 0.0, p * np.log2(safe), 0.0)


def entropy(a, c, n_pos, n_neg, smoothed=False):
    """Binary entropy of the class-rate-normalized distribution of a term."""
    a, c = _as_f64(a, c)
    if smoothed:
        a = a + 1.0
        c = c + 1.0
    elif np.any(a + c < 1.0):
        raise ValueError("raw entropy needs a + c >= 1")
    ra = a / n_pos
    rc = c / n_neg
    total = ra + rc
    p_pos = ra / total
    p_neg = rc / total
    return -_xlog2x(p_pos) - _xlog2x(p_neg)


def entropy_h(t, s, smoothed=False):
    return float(entropy(t.a, t.c, s.n_pos, s.n_neg, smoothed))


def regularize(b0, fx):
    """Bias-term regularization ``b0 + (1 - b0) * fx`` for fx in [0, 1]."""
    if not 0.0 <= b0 <= 1.0:
        raise ValueError("b0 must lie in [0, 1]")
    fx_arr = np.asarray(fx, dtype=np.float64)
    if np.any(fx_arr < 0.0) or np.any(fx_arr > 1.0):
        raise ValueError("fx must lie in [0, 1]")
    out = b0 + (1.0 - b0) * fx_arr
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# global weights
# --------------------------------------------------------------------------

def _information_gain(a, b, c, d, n):
    def term(x, row, col):
        safe_x = np.where(x > 0.0, x, 1.0)
        safe_den = np.where(x > 0.0, row * col, 1.0)
        return np.where(x > 0.0, x / n * np.log2(safe_x * n / safe_den), 0.0)

    return (term(a, a + b, a + c) + term(b, a + b, b + d)
            + term(c, a + c, c + d) + term(d, b + d, c + d))


def global_weights(scheme, a, c, n_pos, n_neg):
    """Evaluate ``scheme`` for every term given arrays of a and c counts."""
    a, c = _as_f64(a, c)
    a = np.atleast_1d(a)
    c = np.atleast_1d(c)
    n_pos = float(n_pos)
    n_neg = float(n_neg)
    b = n_pos - a
    d = n_neg - c
    n = n_pos + n_neg
    df = a + c
    sid = scheme.id
    if np.any(a < 0) or np.any(c < 0) or np.any(b < 0) or np.any(d < 0):
        raise ValueError("contingency counts out of range")
    if sid == "no":
        return np.ones_like(a)
    if sid == "scaled_x":
        return scale_array(scheme.scaling, imbalance_ratio(a, c, n_pos, n_neg))
    if sid == "re":
        h = entropy(a, c, n_pos, n_neg, smoothed=True)
        return scheme.b0 + (1.0 - scheme.b0) * (1.0 - h)
    if np.any(df < 1.0):
        bad = np.flatnonzero(df < 1.0)
        raise DegenerateArgumentError(sid, bad, "term occurs in no document")
    with np.errstate(divide="ignore", invalid="ignore"):
        if sid == "idf":
            return np.log2(n / df)
        if sid == "pidf":
            bad = np.flatnonzero(df >= n)
            if bad.size:
                raise DegenerateArgumentError(
                    sid, bad, "term occurs in every document (a + c >= N)")
            return np.log2(n / df - 1.0)
        if sid == "bidf":
            return np.log2((b + d + 0.5) / (df + 0.5))
        if sid == "ig":
            return _information_gain(a, b, c, d, n)
        if sid == "gr":
            class_entropy = -(_xlog2x(np.float64(n_pos / n))
                              + _xlog2x(np.float64(n_neg / n)))
            return _information_gain(a, b, c, d, n) / class_entropy
        if sid == "mi":
            return np.log2(np.maximum(a * n / (df * n_pos), c * n / (df * n_neg)))
        if sid == "mi_prime":
            ra = a / n_pos
            rc = c / n_neg
            return np.log2(np.maximum(2.0 * ra / (ra + rc), 2.0 * rc / (ra + rc)))
        if sid == "chi":
            den = df * (b + d) * (a + b) * (c + d)
            num = n * (a * d - b * c) ** 2
            # den == 0 only when b = d = 0, which forces num == 0 too
            return np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
        if sid == "didf":
            bad = np.flatnonzero((a == 0) | (c == 0))
            if bad.size:
                raise SingularTermError(sid, bad)
            return np.log2(n_neg * a / (n_pos * c))
        if sid == "dsidf":
            return np.log2(n_neg * (a + 0.5) / (n_pos * (c + 0.5)))
        if sid == "dsidf_legacy":
            return np.log2((n_neg * a + 0.5) / (n_pos * c + 0.5))
        if sid == "dspidf":
            bad = np.flatnonzero((b == 0) | (d == 0))
            if bad.size:
                raise DegenerateArgumentError(
                    sid, bad, "term occurs in every document of a class")
            return np.log2(d * (a + 0.5) / (b * (c + 0.5)))
        if sid == "dbidf":
            return np.log2((d + 0.5) * (a + 0.5) / ((b + 0.5) * (c + 0.5)))
        if sid == "rf":
            return np.log2(2.0 + a / np.maximum(1.0, c))
        if sid == "ne":
            return 1.0 - entropy(a, c, n_pos, n_neg, smoothed=False)
    raise ValueError(f"unknown global scheme {sid!r}")  # pragma: no cover


def global_weight(scheme, t, s):
    return float(global_weights(scheme, t.a, t.c, s.n_pos, s.n_neg)[0])


# --------------------------------------------------------------------------
# fitting and vectorization
# --------------------------------------------------------------------------

def contingency_counts(counts, vocab=None):
    """Document-frequency contingency table and collection stats of ``counts``.

    ``counts`` is a labeled :class:`~termweight.textproc.CountMatrix` built
    from training documents.
    """
    if counts.labels is None:
        raise ValueError("contingency counts need labeled documents")
    if vocab is not None and counts.dim != len(vocab):
        raise ValueError("count matrix does not match the vocabulary")
    labels = counts.labels
    present = counts.tf.copy()
    present.data = (present.data > 0).astype(np.float64)
    present.eliminate_zeros()
    pos = np.asarray(present[labels == 1].sum(axis=0)).ravel()
    neg = np.asarray(present[labels == -1].sum(axis=0)).ravel()
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == -1))
    avg_dl = float(np.mean(counts.dl)) if counts.n_docs else 0.0
    table = ContingencyTable(pos.astype(np.int64), neg.astype(np.int64),
                             n_pos, n_neg)
    return table, CollectionStats(n_pos + n_neg, n_pos, n_neg, avg_dl)


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-d and equal length")
        if idx.size > 1 and np.any(np.diff(idx) <= 0):
            raise ValueError("indices must be strictly increasing")
        if not np.all(np.isfinite(val)):
            raise ValueError("values must be finite")
        keep = val != 0.0
        object.__setattr__(self, "indices", idx[keep])
        object.__setattr__(self, "values", val[keep])

    def __len__(self):
        return self.indices.size

    def as_dict(self):
        return dict(zip(self.indices.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class WeightModel:
    local: LocalScheme
    scheme: GlobalScheme
    global_weights: np.ndarray
    normalize: bool
    stats: CollectionStats
    vocab_size: int = field(init=False)

    def __post_init__(self):
        g = np.asarray(self.global_weights, dtype=np.float64)
        if not np.all(np.isfinite(g)):
            raise WeightingError("global weights must be finite")
        object.__setattr__(self, "global_weights", g)
        object.__setattr__(self, "vocab_size", g.shape[0])

    def to_text(self):
        s = self.stats
        lines = [
            "# termweight weight model",
            f"local={self.local.id}",
            f"local.k={self.local.k!r}",
            f"local.k1={self.local.k1!r}",
            f"local.b={self.local.b!r}",
            f"global={self.scheme.id}",
            f"global.b0={'' if self.scheme.b0 is None else repr(float(self.scheme.b0))}",
            f"global.scaling={self.scheme.scaling or ''}",
            f"normalize={'true' if self.normalize else 'false'}",
            f"stats.N={s.N}",
            f"stats.n_pos={s.n_pos}",
            f"stats.n_neg={s.n_neg}",
            f"stats.avg_dl={float(s.avg_dl)!r}",
            f"dim={self.vocab_size}",
        ]
        lines += [f"{i}\t{float(g)!r}" for i, g in enumerate(self.global_weights)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        header = {}
        weights = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line or line.startswith("#"):
                continue
            if "\t" in line:
                idx, val = line.split("\t")
                if int(idx) != len(weights):
                    raise ValueError(f"line {lineno}: non-dense weight index")
                weights.append(float(val))
            else:
                key, _, val = line.partition("=")
                header[key] = val
        try:
            local = LocalScheme(header["local"], float(header["local.k"]),
                                float(header["local.k1"]), float(header["local.b"]))
            scheme = GlobalScheme(header["global"],
                                  float(header["global.b0"]) if header["global.b0"] else None,
                                  header["global.scaling"] or None)
            stats = CollectionStats(int(header["stats.N"]), int(header["stats.n_pos"]),
                                    int(header["stats.n_neg"]),
                                    float(header["stats.avg_dl"]))
            dim = int(header["dim"])
            normalize = header["normalize"] == "true"
        except KeyError as exc:
            raise ValueError(f"weight model is missing header key {exc}") from None
        if dim != len(weights):
            raise ValueError(f"weight model declares dim={dim} but lists "
                             f"{len(weights)} weights")
        return cls(local, scheme, np.array(weights, dtype=np.float64), normalize,
                   stats)


def _name_terms(exc, vocab):
    if vocab is None:
        return exc
    terms = [vocab.entries[i] for i in exc.positions]
    if isinstance(exc, SingularTermError):
        return SingularTermError(exc.scheme, exc.positions, terms)
    return DegenerateArgumentError(exc.scheme, exc.positions, exc.reason, terms)


def fit_weight_model(counts, vocab, local, scheme, normalize=True):
    """Fit global weights on the training ``counts`` (a labeled CountMatrix)."""
    table, stats = contingency_counts(counts, vocab)
    try:
        g = global_weights(scheme, table.a, table.c, stats.n_pos, stats.n_neg)
    except (SingularTermError, DegenerateArgumentError) as exc:
        raise _name_terms(exc, vocab) from None
    return WeightModel(local, scheme, g, normalize, stats)


def _check_btf(model):
    if model.local.id == "btf" and model.stats.avg_dl <= 0:
        raise ValueError("btf needs a positive average document length")


def transform(counts, model, use_numba=None):
    """Weighted (and optionally cosine-normalized) CSR matrix for ``counts``."""
    if counts.dim != model.vocab_size:
        raise ValueError(f"count matrix has {counts.dim} columns, weight model "
                         f"{model.vocab_size}")
    _check_btf(model)
    tf = counts.tf
    indptr = tf.indptr.astype(np.int64)
    indices = tf.indices.astype(np.int64)
    loc = model.local
    values = _kernels.weigh_rows(
        indptr, indices, tf.data, counts.max_tf, counts.dl, model.global_weights,
        _kernels.LOCAL_CODES[loc.id], loc.k, loc.k1, loc.b, model.stats.avg_dl,
        model.normalize, use_numba=use_numba)
    out = sp.csr_matrix((values, indices, indptr), shape=tf.shape)
    out.eliminate_zeros()
    return out


def vectorize(doc, model):
    """Weight a single :class:`~termweight.textproc.CountedDoc`."""
    _check_btf(model)
    loc = model.local
    idx = np.asarray(doc.indices, dtype=np.int64)
    if idx.size and idx.max() >= model.vocab_size:
        raise ValueError("document index outside the weight model")
    values = _kernels.weigh_rows(
        np.array([0, idx.size], dtype=np.int64), idx, doc.tf,
        np.array([doc.max_tf]), np.array([doc.dl]), model.global_weights,
        _kernels.LOCAL_CODES[loc.id], loc.k, loc.k1, loc.b, model.stats.avg_dl,
        model.normalize)
    return SparseVector(idx, values)
