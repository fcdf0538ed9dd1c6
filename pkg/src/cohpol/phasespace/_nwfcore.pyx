# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot loop for the negativity integral.

Evaluates ``rows[i] = sum_j |sum_r X[i, r] Y[j, r]|``.  Rows are processed in
blocks so the innermost loop runs over contiguous rows and vectorizes; the
operation order per row is the same as in the numpy fallback (``r`` then
``j``, left to right), which makes the two backends bit-identical.  A block is
owned by exactly one thread, so the thread count never changes the result.
"""

import numpy as np
cimport cython
from cython.parallel cimport prange, threadid
from libc.math cimport fabs

cdef Py_ssize_t BLOCK = 256


def abs_bilinear_rowsums(const double[:, ::1] X, const double[:, ::1] Y, int num_threads=1):
    cdef Py_ssize_t nx = X.shape[0]
    cdef Py_ssize_t ny = Y.shape[0]
    cdef Py_ssize_t nr = X.shape[1]
    if Y.shape[1] != nr:
        raise ValueError("X and Y need the same number of rank terms")
    if num_threads < 1:
        num_threads = 1
    out = np.zeros(nx, dtype=np.float64)
    if nx == 0 or nr == 0:
        return out
    xt_arr = np.ascontiguousarray(np.asarray(X).T)
    # per-thread block copy of XT (avoids cache-set aliasing of long rows) + partial sums
    scratch = np.empty((num_threads, (nr + 1) * BLOCK), dtype=np.float64)
    cdef const double[:, ::1] XT = xt_arr
    cdef double[::1] rows = out
    cdef double[:, ::1] sbuf = scratch
    cdef Py_ssize_t nblocks = (nx + BLOCK - 1) // BLOCK
    cdef Py_ssize_t blk, i0, n, j, r, b
    cdef int tid
    cdef double yr
    cdef double* s
    cdef double* acc
    cdef double* xb
    cdef double* xr
    with nogil:
        for blk in prange(nblocks, num_threads=num_threads, schedule="static"):
            tid = threadid()
            s = &sbuf[tid, 0]
            i0 = blk * BLOCK
            n = nx - i0
            if n > BLOCK:
                n = BLOCK
            acc = &rows[i0]
            xb = s + BLOCK
            for r in range(nr):
                for b in range(n):
                    xb[r * BLOCK + b] = XT[r, i0 + b]
            for j in range(ny):
                yr = Y[j, 0]
                xr = xb
                for b in range(n):
                    s[b] = xr[b] * yr
                for r in range(1, nr):
                    yr = Y[j, r]
                    xr = xb + r * BLOCK
                    for b in range(n):
                        s[b] = s[b] + xr[b] * yr
                for b in range(n):
                    acc[b] = acc[b] + fabs(s[b])
    return out
