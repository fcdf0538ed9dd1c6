"""Pure-numpy fallback for :mod:`cohpol.phasespace._nwfcore`.

Same contract and the same floating-point operation order as the compiled
loop: for each row ``i``, ``s = X[i,0] Y[j,0] + X[i,1] Y[j,1] + ...`` left to
right, then ``acc += |s|`` for ``j = 0, 1, ...``.  Vectorizing over rows
instead of columns keeps that order, so both backends give bit-identical
row sums, for any thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

MIN_ROWS_PER_TASK = 256


def _rows(xt: np.ndarray, y: np.ndarray, start: int, stop: int) -> np.ndarray:
    xb = xt[:, start:stop]
    nr = xb.shape[0]
    acc = np.zeros(stop - start)
    s = np.empty(stop - start)
    t = np.empty(stop - start)
    for yj in y:
        np.multiply(xb[0], yj[0], out=s)
        for r in range(1, nr):
            np.multiply(xb[r], yj[r], out=t)
            s += t
        np.abs(s, out=s)
        acc += s
    return acc


def abs_bilinear_rowsums(X, Y, num_threads: int = 1) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    if X.shape[1] != Y.shape[1]:
        raise ValueError("X and Y need the same number of rank terms")
    xt = np.ascontiguousarray(X.T)
    nx = X.shape[0]
    if num_threads <= 1 or nx < 2 * MIN_ROWS_PER_TASK:
        return _rows(xt, Y, 0, nx)
    edges = np.linspace(0, nx, num_threads + 1).astype(int)
    bounds = [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    out = np.empty(nx)
    with ThreadPoolExecutor(max_workers=num_threads) as pool:
        for (a, b), vals in zip(bounds, pool.map(lambda ab: _rows(xt, Y, *ab), bounds)):
            out[a:b] = vals
    return out
