"""numpy implementation of the sample kernels, used when the compiled module
is unavailable. Same signatures and outputs as ``_kernel``."""
import numpy as np


def sample_values(m, lo, hi):
    m = np.asarray(m)
    k = m.shape[0]
    dtype = m.dtype
    sums = np.zeros((1, k), dtype=dtype)
    for j in range(k):
        add = np.zeros((k + 1, k), dtype=dtype)
        add[1:] = m[:, :, j].T
        if j == 0:
            add = add[lo:hi]
        sums = (sums[:, None, :] + add[None, :, :]).reshape(-1, k)
    return np.abs(sums).sum(axis=1)


def sample_codes(k, lo, hi):
    alpha = np.zeros(1, dtype=np.uint32)
    gamma = np.zeros(1, dtype=np.uint32)
    mult = np.zeros((1, k), dtype=np.uint8)
    for j in range(k):
        digits = np.arange(k + 1)
        if j == 0:
            digits = digits[lo:hi]
        nd = len(digits)
        a_add = (digits > 0).astype(np.uint32)
        g_add = (digits == j + 1).astype(np.uint32)
        m_add = np.zeros((nd, k), dtype=np.uint8)
        for t, d in enumerate(digits):
            if d:
                m_add[t, d - 1] += 1
                m_add[t, j] += 1
        alpha = (alpha[:, None] + a_add[None, :]).reshape(-1)
        gamma = (gamma[:, None] + g_add[None, :]).reshape(-1)
        mult = (mult[:, None, :] + m_add[None, :, :]).reshape(-1, k)
    beta = (mult > 0).sum(axis=1).astype(np.uint32)
    delta = (mult == 1).sum(axis=1).astype(np.uint32)
    return (alpha << 24) | (beta << 16) | (gamma << 8) | delta
