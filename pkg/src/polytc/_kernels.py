"""Search kernels for the multiset norm maximization.

Maximal faces are passed as an int64 array of bitmasks in canonical order.
A candidate is a nondecreasing index tuple (a multiset of maximal faces),
enumerated in lexicographic order, so the first maximizer found is the
lexicographically least one.

Two scoring modes are supported and must agree:

* ``SYMMETRIC``: ``sum |J_i| - |(J_1 & ... & J_s) & odd|``
* ``RECURSIVE``: ``sum_{l>=2} (|prefix_{l-1} - J_l| + |J_l|) + |J_1 & ... & J_s & even|``

The numba path runs a depth-first branch-and-bound.  The numpy path
enumerates every multiset in chunks and scores them vectorized.  Select with
``POLYTC_BACKEND=numba|numpy`` (default numba when importable).
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np

SYMMETRIC = 0
RECURSIVE = 1

_CHUNK = 1 << 18

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def default_backend() -> str:
    name = os.environ.get("POLYTC_BACKEND", "numba" if HAVE_NUMBA else "numpy").lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"POLYTC_BACKEND must be 'numba' or 'numpy', got {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        return "numpy"
    return name


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _search_numba(masks, s, odd, even, mode):
    w = masks.shape[0]
    sizes = np.empty(w, dtype=np.int64)
    maxsize = 0
    for a in range(w):
        sizes[a] = _popcount(masks[a])
        if sizes[a] > maxsize:
            maxsize = sizes[a]

    idx = np.zeros(s, dtype=np.int64)
    best_idx = np.zeros(s, dtype=np.int64)
    # prefix[d] = J_0 & ... & J_d ; acc[d] = score contribution of levels 0..d
    prefix = np.zeros(s, dtype=np.int64)
    acc = np.zeros(s, dtype=np.int64)
    best = -1

    depth = 0
    idx[0] = 0
    while depth >= 0:
        a = idx[depth]
        if a >= w:
            depth -= 1
            if depth >= 0:
                idx[depth] += 1
            continue
        m = masks[a]
        if depth == 0:
            prefix[0] = m
            if mode == 0:
                acc[0] = sizes[a]
            else:
                acc[0] = 0
        else:
            prefix[depth] = prefix[depth - 1] & m
            if mode == 0:
                acc[depth] = acc[depth - 1] + sizes[a]
            else:
                acc[depth] = acc[depth - 1] + _popcount(prefix[depth - 1] & ~m) + sizes[a]

        remaining = s - 1 - depth
        if mode == 0:
            bound = acc[depth] + remaining * maxsize
        else:
            bound = acc[depth] + _popcount(prefix[depth]) + remaining * maxsize
        if bound <= best:
            idx[depth] += 1
            continue

        if remaining == 0:
            if mode == 0:
                val = acc[depth] - _popcount(prefix[depth] & odd)
            else:
                val = acc[depth] + _popcount(prefix[depth] & even)
            if val > best:
                best = val
                for q in range(s):
                    best_idx[q] = idx[q]
            idx[depth] += 1
        else:
            idx[depth + 1] = a
            depth += 1
    return best, best_idx


def _search_numpy(masks, s, odd, even, mode):
    masks = np.asarray(masks, dtype=np.int64)
    w = masks.shape[0]
    sizes = np.bitwise_count(masks).astype(np.int64)
    total = math.comb(w + s - 1, s)
    gen = itertools.combinations_with_replacement(range(w), s)
    best = -1
    best_idx = None
    done = 0
    while done < total:
        rows = min(_CHUNK, total - done)
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(gen, rows)),
                           dtype=np.int64, count=rows * s)
        idx = flat.reshape(rows, s)
        sel = masks[idx]
        if mode == SYMMETRIC:
            inter = np.bitwise_and.reduce(sel, axis=1)
            vals = sizes[idx].sum(axis=1) - np.bitwise_count(inter & odd)
        else:
            pref = np.bitwise_and.accumulate(sel, axis=1)
            vals = np.zeros(rows, dtype=np.int64)
            for l in range(1, s):
                vals += np.bitwise_count(pref[:, l - 1] & ~sel[:, l]) + sizes[idx[:, l]]
            vals += np.bitwise_count(pref[:, -1] & even)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best = int(vals[k])
            best_idx = idx[k].copy()
        done += rows
    return best, best_idx


def best_multiset(masks, s, odd_mask, even_mask, mode=SYMMETRIC, backend=None):
    """Maximize the chosen score over multisets of ``s`` maximal faces.

    Returns ``(value, indices)`` with ``indices`` the lexicographically least
    nondecreasing maximizer.
    """
    if s < 1:
        raise ValueError("s must be positive")
    backend = backend or default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    arr = np.ascontiguousarray(masks, dtype=np.int64)
    if backend == "numba":
        val, idx = _search_numba(arr, np.int64(s), np.int64(odd_mask), np.int64(even_mask), np.int64(mode))
    else:
        val, idx = _search_numpy(arr, s, np.int64(odd_mask), np.int64(even_mask), mode)
    return int(val), tuple(int(i) for i in idx)
