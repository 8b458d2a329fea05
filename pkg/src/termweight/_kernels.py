"""Hot loops: document weighting and dual coordinate descent.

Every kernel exists twice. The ``*_nb`` variants are explicit loops compiled
by numba; the ``*_np`` variants express the same computation with numpy
array operations and run without numba. Both consume CSR triplets
(``indptr``, ``indices``, ``data``) and share the coordinate order, so they
agree up to floating-point summation order.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

LOCAL_CODES = {"tf": 0, "tp": 1, "atf": 2, "ltf": 3, "btf": 4}

_MODULUS = 2147483647  # 2**31 - 1, Park-Miller minimal standard
_MULTIPLIER = 48271


def seed_state(seed):
    return int(seed) % (_MODULUS - 1) + 1


def _shuffle(order, state):
    # Fisher-Yates driven by a 31-bit LCG; products stay below 2**47.
    for i in range(order.shape[0] - 1, 0, -1):
        state = (state * _MULTIPLIER) % _MODULUS
        j = state % (i + 1)
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp
    return state


_shuffle_nb = njit(_shuffle)


# --------------------------------------------------------------------------
# document weighting
# --------------------------------------------------------------------------

def _local_nb_scalar(code, tf, max_tf, dl, avg_dl, k, k1, b):
    if code == 0:
        return tf
    if code == 1:
        return 1.0 if tf > 0 else 0.0
    if code == 2:
        return k + (1.0 - k) * tf / max_tf
    if code == 3:
        return np.log2(1.0 + tf)
    return (k1 + 1.0) * tf / (k1 * ((1.0 - b) + b * dl / avg_dl) + tf)


_local_nb = njit(_local_nb_scalar)


@njit
def _weigh_rows_nb(indptr, indices, tf, max_tf, dl, g, code, k, k1, b,
                   avg_dl, normalize):
    out = np.empty(tf.shape[0], dtype=np.float64)
    n_rows = indptr.shape[0] - 1
    for r in range(n_rows):
        start = indptr[r]
        stop = indptr[r + 1]
        sq = 0.0
        for p in range(start, stop):
            v = _local_nb(code, tf[p], max_tf[r], dl[r], avg_dl, k, k1, b)
            v *= g[indices[p]]
            out[p] = v
            sq += v * v
        if normalize and sq > 0.0:
            norm = np.sqrt(sq)
            for p in range(start, stop):
                out[p] /= norm
    return out


def _weigh_rows_np(indptr, indices, tf, max_tf, dl, g, code, k, k1, b,
                   avg_dl, normalize):
    lengths = np.diff(indptr)
    row_max = np.repeat(max_tf, lengths)
    row_dl = np.repeat(dl, lengths)
    if code == 0:
        local = tf.copy()
    elif code == 1:
        local = (tf > 0).astype(np.float64)
    elif code == 2:
        local = k + (1.0 - k) * tf / row_max
    elif code == 3:
        local = np.log2(1.0 + tf)
    else:
        local = (k1 + 1.0) * tf / (k1 * ((1.0 - b) + b * row_dl / avg_dl) + tf)
    out = local * g[indices]
    if normalize and out.size:
        rows = np.repeat(np.arange(lengths.size), lengths)
        norms = np.sqrt(np.bincount(rows, weights=out * out,
                                    minlength=lengths.size))
        scale = np.where(norms > 0.0, norms, 1.0)
        out = out / scale[rows]
    return out


def weigh_rows(indptr, indices, tf, max_tf, dl, g, code, k, k1, b, avg_dl,
               normalize, use_numba=None):
    if use_numba is None:
        use_numba = USE_NUMBA
    fn = _weigh_rows_nb if use_numba else _weigh_rows_np
    return fn(indptr, indices, np.asarray(tf, dtype=np.float64),
              np.asarray(max_tf, dtype=np.float64),
              np.asarray(dl, dtype=np.float64), g, int(code), float(k),
              float(k1), float(b), float(avg_dl), bool(normalize))


# --------------------------------------------------------------------------
# L2-regularized L2-loss SVM, dual coordinate descent
# --------------------------------------------------------------------------

@njit
def _dcd_nb(indptr, indices, data, y, dim, C, tol, max_iter, state):
    n = indptr.shape[0] - 1
    diag = 0.5 / C
    alpha = np.zeros(n)
    w = np.zeros(dim)
    qd = np.empty(n)
    for i in range(n):
        s = diag
        for p in range(indptr[i], indptr[i + 1]):
            s += data[p] * data[p]
        qd[i] = s
    order = np.arange(n)
    n_iter = 0
    violation = np.inf
    while n_iter < max_iter:
        state = _shuffle_nb(order, state)
        violation = 0.0
        for s in range(n):
            i = order[s]
            start = indptr[i]
            stop = indptr[i + 1]
            dot = 0.0
            for p in range(start, stop):
                dot += w[indices[p]] * data[p]
            grad = y[i] * dot - 1.0 + diag * alpha[i]
            pg = grad if alpha[i] > 0.0 else min(grad, 0.0)
            if abs(pg) > violation:
                violation = abs(pg)
            if pg != 0.0:
                old = alpha[i]
                new = max(old - grad / qd[i], 0.0)
                alpha[i] = new
                step = (new - old) * y[i]
                for p in range(start, stop):
                    w[indices[p]] += step * data[p]
        n_iter += 1
        if violation < tol:
            break
    return w, alpha, n_iter, violation


def _dcd_np(indptr, indices, data, y, dim, C, tol, max_iter, state):
    n = indptr.shape[0] - 1
    diag = 0.5 / C
    alpha = np.zeros(n)
    w = np.zeros(dim)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    qd = diag + np.bincount(rows, weights=data * data, minlength=n)
    slices = [(indices[indptr[i]:indptr[i + 1]], data[indptr[i]:indptr[i + 1]])
              for i in range(n)]
    order = np.arange(n)
    n_iter = 0
    violation = np.inf
    while n_iter < max_iter:
        state = _shuffle(order, state)
        violation = 0.0
        for i in order:
            idx, val = slices[i]
            grad = y[i] * np.dot(w[idx], val) - 1.0 + diag * alpha[i]
            pg = grad if alpha[i] > 0.0 else min(grad, 0.0)
            violation = max(violation, abs(pg))
            if pg != 0.0:
                old = alpha[i]
                alpha[i] = max(old - grad / qd[i], 0.0)
                w[idx] += (alpha[i] - old) * y[i] * val
        n_iter += 1
        if violation < tol:
            break
    return w, alpha, n_iter, violation


def dual_cd(indptr, indices, data, y, dim, C, tol, max_iter, seed,
            use_numba=None):
    """Run dual coordinate descent; return ``(w, alpha, n_iter, violation)``."""
    if use_numba is None:
        use_numba = USE_NUMBA
    fn = _dcd_nb if use_numba else _dcd_np
    return fn(np.asarray(indptr, dtype=np.int64),
              np.asarray(indices, dtype=np.int64),
              np.asarray(data, dtype=np.float64),
              np.asarray(y, dtype=np.float64), int(dim), float(C),
              float(tol), int(max_iter), seed_state(seed))
