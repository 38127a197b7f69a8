"""Pure-numpy kernel backend.

Mirrors ``_kernels.pyx`` operation for operation.  Sampling uses only
unsigned 64-bit integer arithmetic, so counts match the compiled backend
exactly; the objective evaluation keeps the same floating-point operation
order (explicit sequential accumulation instead of pairwise sums) so both
backends agree to the last few ulps.
"""

from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

_CHUNK = 1 << 20


def _fmix64(z: np.ndarray) -> np.ndarray:
    z ^= z >> _S30
    z *= _M1
    z ^= z >> _S27
    z *= _M2
    z ^= z >> _S31
    return z


def counts_from_stream(seed: int, shots: int, bounds: np.ndarray) -> np.ndarray:
    k = bounds.shape[0] + 1
    counts = np.zeros(k, dtype=np.int64)
    seed_u = np.uint64(seed)
    lo = 0
    with np.errstate(over="ignore"):
        while lo < shots:
            hi = min(lo + _CHUNK, shots)
            counters = np.arange(lo + 1, hi + 1, dtype=np.uint64)
            z = _fmix64(seed_u + counters * _GAMMA)
            cells = np.searchsorted(bounds, z, side="right")
            counts += np.bincount(cells, minlength=k)
            lo = hi
    return counts


def measure_batch(vt, m, d_a, d_b, pairs, rot_c, rot_s, rot_e, col_phase, measure_id):
    batch = rot_c.shape[0]
    r, dim = vt.shape
    work = np.zeros((batch, m, dim), dtype=np.complex128)
    work[:, :r, :] = vt[None, :, :] * col_phase[:, :, None]
    for k in range(pairs.shape[0]):
        i = int(pairs[k, 0])
        j = int(pairs[k, 1])
        c = rot_c[:, k][:, None]
        se = rot_s[:, k][:, None] * rot_e[:, k][:, None]
        wi = work[:, i, :]
        wj = work[:, j, :]
        new_i = c * wi - se * wj
        new_j = np.conj(se) * wi + c * wj
        work[:, i, :] = new_i
        work[:, j, :] = new_j

    out = np.zeros(batch, dtype=np.float64)
    if measure_id == 0:
        w0 = work[:, :, 0]
        w1 = work[:, :, 1]
        w2 = work[:, :, 2]
        w3 = work[:, :, 3]
        tau = 2.0 * (w0 * w3 - w1 * w2)
        num = tau.real**2 + tau.imag**2
        p = w0.real**2 + w0.imag**2
        p = p + (w1.real**2 + w1.imag**2)
        p = p + (w2.real**2 + w2.imag**2)
        p = p + (w3.real**2 + w3.imag**2)
        good = p > 1e-300
        contrib = np.where(good, num / np.where(good, p, 1.0), 0.0)
        for row in range(m):
            out += contrib[:, row]
        return out

    n_eff = min(d_a, d_b)
    coef = n_eff / (n_eff - 1.0)
    for row in range(m):
        w = work[:, row, :]
        p = w[:, 0].real ** 2 + w[:, 0].imag ** 2
        for d in range(1, dim):
            p = p + (w[:, d].real ** 2 + w[:, d].imag ** 2)
        trg2 = np.zeros(batch, dtype=np.float64)
        for a in range(d_a):
            for b in range(d_a):
                g = w[:, a * d_b] * np.conj(w[:, b * d_b])
                for kk in range(1, d_b):
                    g = g + w[:, a * d_b + kk] * np.conj(w[:, b * d_b + kk])
                trg2 = trg2 + (g.real**2 + g.imag**2)
        good = p > 1e-300
        out += np.where(good, coef * (p - trg2 / np.where(good, p, 1.0)), 0.0)
    return out
