# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled kernel backend.

Mirrors ``_kernels_py`` operation for operation; see that module for the
contract.  Sampling is exact integer arithmetic; the objective evaluation
keeps the same floating-point accumulation order as the fallback.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 GAMMA = <u64>0x9E3779B97F4A7C15ULL
cdef u64 M1 = <u64>0xBF58476D1CE4E5B9ULL
cdef u64 M2 = <u64>0x94D049BB133111EBULL


cdef inline u64 fmix64(u64 z) nogil:
    z ^= z >> 30
    z = z * M1
    z ^= z >> 27
    z = z * M2
    z ^= z >> 31
    return z


def counts_from_stream(object seed, long long shots, cnp.uint64_t[::1] bounds):
    cdef u64 s = <u64>seed
    cdef Py_ssize_t nb = bounds.shape[0]
    out = np.zeros(nb + 1, dtype=np.int64)
    cdef long long[::1] counts = out
    cdef long long i
    cdef Py_ssize_t c
    cdef u64 z
    with nogil:
        for i in range(shots):
            z = fmix64(s + (<u64>(i + 1)) * GAMMA)
            c = 0
            while c < nb and z >= bounds[c]:
                c += 1
            counts[c] += 1
    return out


def measure_batch(
    double complex[:, ::1] vt,
    int m,
    int d_a,
    int d_b,
    int[:, ::1] pairs,
    double[:, ::1] rot_c,
    double[:, ::1] rot_s,
    double complex[:, ::1] rot_e,
    double complex[:, ::1] col_phase,
    int measure_id,
):
    cdef Py_ssize_t batch = rot_c.shape[0]
    cdef Py_ssize_t r = vt.shape[0]
    cdef Py_ssize_t dim = vt.shape[1]
    cdef Py_ssize_t n_pairs = pairs.shape[0]
    out = np.zeros(batch, dtype=np.float64)
    cdef double[::1] res = out
    buf = np.zeros((m, dim), dtype=np.complex128)
    cdef double complex[:, ::1] work = buf
    cdef Py_ssize_t b, k, row, d, a, a2, kk
    cdef int i, j
    cdef double c, sreal, p, num, trg2, acc, coef
    cdef double complex se, cse, wi, wj, tau, g
    cdef int n_eff = d_a if d_a < d_b else d_b
    coef = n_eff / (n_eff - 1.0) if n_eff > 1 else 0.0

    with nogil:
        for b in range(batch):
            for row in range(r):
                for d in range(dim):
                    work[row, d] = vt[row, d] * col_phase[b, row]
            for row in range(r, m):
                for d in range(dim):
                    work[row, d] = 0
            for k in range(n_pairs):
                i = pairs[k, 0]
                j = pairs[k, 1]
                c = rot_c[b, k]
                se = rot_s[b, k] * rot_e[b, k]
                cse = se.conjugate()
                for d in range(dim):
                    wi = work[i, d]
                    wj = work[j, d]
                    work[i, d] = c * wi - se * wj
                    work[j, d] = cse * wi + c * wj
            acc = 0.0
            if measure_id == 0:
                for row in range(m):
                    tau = 2.0 * (work[row, 0] * work[row, 3] - work[row, 1] * work[row, 2])
                    num = tau.real * tau.real + tau.imag * tau.imag
                    p = work[row, 0].real * work[row, 0].real + work[row, 0].imag * work[row, 0].imag
                    p = p + (work[row, 1].real * work[row, 1].real + work[row, 1].imag * work[row, 1].imag)
                    p = p + (work[row, 2].real * work[row, 2].real + work[row, 2].imag * work[row, 2].imag)
                    p = p + (work[row, 3].real * work[row, 3].real + work[row, 3].imag * work[row, 3].imag)
                    if p > 1e-300:
                        acc = acc + num / p
            else:
                for row in range(m):
                    p = work[row, 0].real * work[row, 0].real + work[row, 0].imag * work[row, 0].imag
                    for d in range(1, dim):
                        p = p + (work[row, d].real * work[row, d].real + work[row, d].imag * work[row, d].imag)
                    trg2 = 0.0
                    for a in range(d_a):
                        for a2 in range(d_a):
                            g = work[row, a * d_b] * work[row, a2 * d_b].conjugate()
                            for kk in range(1, d_b):
                                g = g + work[row, a * d_b + kk] * work[row, a2 * d_b + kk].conjugate()
                            trg2 = trg2 + (g.real * g.real + g.imag * g.imag)
                    if p > 1e-300:
                        acc = acc + coef * (p - trg2 / p)
            res[b] = acc
    return out
