"""Hot-kernel backend selection and shared deterministic helpers.

Two operations dominate runtime and are implemented twice: once in the
optional Cython extension ``entcorr._kernels`` and once in vectorized numpy
(``entcorr._kernels_py``).  The compiled backend is preferred when it
imports; setting the environment variable ``ENTCORR_PURE_PYTHON=1`` forces
the fallback.  Both produce identical sampling counts (integer arithmetic
only) and objective values that agree to machine precision.

The counter-based random stream is normative for measurement simulation:
the value for shot ``i`` under ``seed`` is ``fmix64(seed + (i + 1) * GAMMA)``
with all arithmetic modulo 2^64, where ``fmix64`` is the splitmix64
finalizer.  Outcomes are chosen by comparing that 64-bit value against
precomputed cumulative interval boundaries, so any partition of the shot
range over workers yields the same counts.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from .errors import ValidationError

_backend = _kernels_py
BACKEND = "python"
if os.environ.get("ENTCORR_PURE_PYTHON", "") != "1":
    try:
        from . import _kernels as _compiled

        _backend = _compiled
        BACKEND = "compiled"
    except ImportError:
        pass

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_DERIVE_STEP = 0xC2B2AE3D27D4EB4F


def backend_name() -> str:
    """Name of the active backend: ``compiled`` or ``python``."""
    return BACKEND


def fmix64(z: int) -> int:
    """splitmix64 finalizer on Python integers (reference implementation)."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return z


def stream_value(seed: int, counter: int) -> int:
    """The normative 64-bit stream value for one (seed, counter) pair."""
    return fmix64((seed + (counter + 1) * GAMMA) & MASK64)


def derive_seed(seed: int, *indices: int) -> int:
    """Fold indices into a seed to obtain decorrelated substreams.

    Used for per-restart optimizer streams, per-entry scan streams and the
    bootstrap stream, so concurrent execution cannot change results.
    """
    s = fmix64(seed & MASK64)
    for j in indices:
        s = fmix64((s + (int(j) + 1) * _DERIVE_STEP) & MASK64)
    return s


def interval_bounds(probs) -> np.ndarray:
    """Interior cumulative boundaries of a probability vector on [0, 2^64).

    Cell ``k`` of ``len(probs)`` cells receives stream values ``z`` with
    ``bounds[k-1] <= z < bounds[k]`` (implicit 0 and 2^64 at the ends).
    All entries must be strictly positive; the caller filters zero cells.
    """
    p = np.asarray(probs, dtype=np.float64)
    if p.size == 0 or np.any(p <= 0) or not np.all(np.isfinite(p)):
        raise ValidationError("probabilities must be finite and strictly positive")
    cum = np.cumsum(p)[:-1]
    scale = float(2.0**64)
    bounds = [min(max(int(round(float(c) * scale)), 0), MASK64) for c in cum]
    return np.array(bounds, dtype=np.uint64)


def counts_from_stream(seed: int, shots: int, bounds: np.ndarray) -> np.ndarray:
    """Outcome counts for ``shots`` counter-based draws over the cells.

    Returns an int64 array of length ``len(bounds) + 1``.  Bit-identical
    across backends, chunk sizes and worker counts.
    """
    b = np.ascontiguousarray(bounds, dtype=np.uint64)
    return _backend.counts_from_stream(int(seed) & MASK64, int(shots), b)


def measure_batch(
    vt: np.ndarray,
    m: int,
    d_a: int,
    d_b: int,
    pairs: np.ndarray,
    rot_c: np.ndarray,
    rot_s: np.ndarray,
    rot_e: np.ndarray,
    col_phase: np.ndarray,
    measure_id: int,
) -> np.ndarray:
    """Average-measure objective for a batch of rotation parameter sets.

    ``vt`` holds the scaled eigenvector rows (r x D); each candidate's
    ensemble is built by phasing the rows with ``col_phase`` and applying
    the Givens rotations listed in ``pairs`` with entries from
    ``rot_c``/``rot_s``/``rot_e``.  ``measure_id`` 0 computes the summed
    squared-concurrence contribution (two qubits), 1 the normalized
    I-concurrence contribution for d x d subsystems.
    """
    return _backend.measure_batch(
        np.ascontiguousarray(vt, dtype=np.complex128),
        int(m),
        int(d_a),
        int(d_b),
        np.ascontiguousarray(pairs, dtype=np.int32),
        np.ascontiguousarray(rot_c, dtype=np.float64),
        np.ascontiguousarray(rot_s, dtype=np.float64),
        np.ascontiguousarray(rot_e, dtype=np.complex128),
        np.ascontiguousarray(col_phase, dtype=np.complex128),
        int(measure_id),
    )
