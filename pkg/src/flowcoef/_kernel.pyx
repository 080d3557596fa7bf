# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled odometer walk over all samples.

Leaves are visited in the same order as ``samples.enumerate_samples``: the
digit of column 0 is most significant, digit 0 means "absent" and digit r
means row r-1.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    MAXK = 16


cdef inline Py_ssize_t _leaves(int k, int lo, int hi):
    cdef Py_ssize_t n = hi - lo
    cdef int t
    for t in range(k - 1):
        n *= k + 1
    return n


def sample_values(const long long[:, :, ::1] m, int lo, int hi):
    """Sum over layers of |partial sum| for every leaf with lead digit in [lo, hi)."""
    cdef int k = m.shape[0]
    if k > MAXK:
        raise ValueError("k too large for the compiled kernel")
    cdef Py_ssize_t total = _leaves(k, lo, hi)
    out = np.empty(total, dtype=np.int64)
    cdef long long[::1] o = out
    cdef long long sums[MAXK + 1][MAXK]
    cdef int digit[MAXK]
    cdef int p, l, level, d
    cdef long long acc, v
    cdef Py_ssize_t idx = 0
    if total == 0:
        return out
    with nogil:
        for l in range(k):
            sums[0][l] = 0
        digit[0] = lo
        for p in range(1, k):
            digit[p] = 0
        p = 0
        while True:
            # rebuild partial sums from level p downwards
            for level in range(p, k):
                d = digit[level]
                if d == 0:
                    for l in range(k):
                        sums[level + 1][l] = sums[level][l]
                else:
                    for l in range(k):
                        sums[level + 1][l] = sums[level][l] + m[l, d - 1, level]
            acc = 0
            for l in range(k):
                v = sums[k][l]
                acc += v if v >= 0 else -v
            o[idx] = acc
            idx += 1
            p = k - 1
            digit[p] += 1
            while digit[p] > k and p > 0:
                digit[p] = 0
                p -= 1
                digit[p] += 1
            if p == 0 and digit[0] >= hi:
                break
    return out


def sample_codes(int k, int lo, int hi):
    """Packed (alpha, beta, gamma, delta) per leaf, 8 bits each."""
    if k > MAXK:
        raise ValueError("k too large for the compiled kernel")
    cdef Py_ssize_t total = _leaves(k, lo, hi)
    out = np.empty(total, dtype=np.uint32)
    cdef unsigned int[::1] o = out
    cdef int mult[MAXK]
    cdef int digit[MAXK]
    cdef int p, l, alpha, beta, gamma, delta, d
    cdef Py_ssize_t idx = 0
    if total == 0:
        return out
    with nogil:
        digit[0] = lo
        for p in range(1, k):
            digit[p] = 0
        while True:
            for l in range(k):
                mult[l] = 0
            alpha = 0
            gamma = 0
            for p in range(k):
                d = digit[p]
                if d:
                    alpha += 1
                    mult[d - 1] += 1
                    mult[p] += 1
                    if d - 1 == p:
                        gamma += 1
            beta = 0
            delta = 0
            for l in range(k):
                if mult[l] > 0:
                    beta += 1
                if mult[l] == 1:
                    delta += 1
            o[idx] = (alpha << 24) | (beta << 16) | (gamma << 8) | delta
            idx += 1
            p = k - 1
            digit[p] += 1
            while digit[p] > k and p > 0:
                digit[p] = 0
                p -= 1
                digit[p] += 1
            if p == 0 and digit[0] >= hi:
                break
    return out
