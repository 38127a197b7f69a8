"""Seeded simulation of Schmidt-basis coincidence measurements.

``simulate_measurements`` draws shots from the joint outcome distribution
P(i, j) = delta_ij lambda_j of a Schmidt decomposition using the
counter-based stream from ``kernels`` (key = seed, counter = shot index),
so results are bit-reproducible regardless of chunking or worker count.

``estimate_en`` is the plug-in estimator: it rebuilds the empirical joint
table, applies the normalized correlation-deviation sum to it, and
attaches a bootstrap standard error (200 multinomial resamples seeded
from the record's seed).  ``estimate_convergence_scan`` repeats the
simulate/estimate pair along a strictly increasing shot schedule with an
independent derived stream per entry.

Record files are JSON documents
``{"kind": "record", "n": ..., "shots": ..., "seed": ..., "counts": [...]}``
with counts flattened row-major.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    InvalidSchedule,
    InvalidShots,
    StateFormatError,
    TooFewShots,
    WrongDimension,
)
from .schmidt import SchmidtDecomposition

_BOOTSTRAP_RESAMPLES = 200
_BOOTSTRAP_TAG = 0xB005


@dataclass(frozen=True)
class MeasurementRecord:
    """Coincidence counts of one simulated run."""

    n: int
    counts: np.ndarray
    shots: int
    seed: int


@dataclass(frozen=True)
class EstimateWithError:
    """A point estimate with its bootstrap standard error."""

    value: float
    std_error: float
    shots: int


def simulate_measurements(dec: SchmidtDecomposition, shots: int, seed: int) -> MeasurementRecord:
    """Sample ``shots`` coincidences from the Schmidt-basis distribution.

    Only diagonal cells carry probability, so off-diagonal counts are zero
    exactly.  Deterministic in (dec, shots, seed).
    """
    if not isinstance(shots, (int, np.integer)) or isinstance(shots, bool) or shots < 1:
        raise InvalidShots(f"shots must be a positive integer, got {shots!r}")
    shots = int(shots)
    seed = int(seed)
    lam = np.asarray(dec.lambdas, dtype=np.float64)
    n = lam.size
    nonzero = np.flatnonzero(lam > 0.0)
    probs = lam[nonzero]
    probs = probs / probs.sum()
    bounds = kernels.interval_bounds(probs)
    cell_counts = kernels.counts_from_stream(seed, shots, bounds)
    counts = np.zeros((n, n), dtype=np.int64)
    counts[nonzero, nonzero] = cell_counts
    counts.setflags(write=False)
    return MeasurementRecord(n=int(n), counts=counts, shots=shots, seed=seed)


def _plugin_value(phat: np.ndarray) -> float:
    n = phat.shape[-1]
    row = phat.sum(axis=-1)
    col = phat.sum(axis=-2)
    dev = np.abs(phat - row[..., :, None] * col[..., None, :])
    return n / (2.0 * (n - 1.0)) * dev.sum(axis=(-2, -1))


def estimate_en(record: MeasurementRecord) -> EstimateWithError:
    """Plug-in estimate of the normalized correlation-sum measure.

    Requires ``shots >= n^2`` so every empirical cell had a chance to be
    resolved; fewer shots raise ``TooFewShots``.
    """
    n = int(record.n)
    if n < 2:
        raise WrongDimension(f"estimation needs n >= 2 outcomes, got n={n}")
    counts = np.asarray(record.counts, dtype=np.int64)
    if counts.shape != (n, n) or np.any(counts < 0):
        raise StateFormatError("record counts must be a nonnegative n x n table")
    shots = int(record.shots)
    if shots < 1:
        raise InvalidShots(f"record shots must be positive, got {shots}")
    if int(counts.sum()) != shots:
        raise StateFormatError(
            f"record counts sum to {int(counts.sum())}, expected shots={shots}"
        )
    if shots < n * n:
        raise TooFewShots(f"need at least n^2 = {n * n} shots, got {shots}")

    phat = counts / float(shots)
    value = float(_plugin_value(phat))

    rng = np.random.Generator(
        np.random.Philox(key=kernels.derive_seed(record.seed, _BOOTSTRAP_TAG))
    )
    pvals = phat.reshape(-1)
    pvals = pvals / pvals.sum()
    resampled = rng.multinomial(shots, pvals, size=_BOOTSTRAP_RESAMPLES)
    boot = _plugin_value(resampled.reshape(_BOOTSTRAP_RESAMPLES, n, n) / float(shots))
    std_error = float(np.std(boot, ddof=1))
    return EstimateWithError(value=value, std_error=std_error, shots=shots)


def estimate_convergence_scan(
    dec: SchmidtDecomposition, shot_schedule, seed: int
) -> list[EstimateWithError]:
    """Simulate and estimate along a strictly increasing shot schedule.

    Entry ``i`` uses an independent stream derived from (seed, i), so the
    scan equals what independent runs at those shot counts would produce.
    """
    schedule = [int(s) for s in shot_schedule]
    if len(schedule) == 0:
        raise InvalidSchedule("shot schedule must not be empty")
    if any(s < 1 for s in schedule):
        raise InvalidShots(f"shot counts must be positive, got {schedule}")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidSchedule(f"shot schedule must be strictly increasing, got {schedule}")
    out = []
    for index, shots in enumerate(schedule):
        record = simulate_measurements(dec, shots, kernels.derive_seed(seed, index))
        out.append(estimate_en(record))
    return out


# --- record files -----------------------------------------------------------

_RECORD_KEYS = {"kind", "n", "shots", "seed", "counts"}


def _reject_constant(token: str):
    raise StateFormatError(f"non-finite number token {token!r} is not allowed")


def parse_record_text(text: str) -> MeasurementRecord:
    """Parse a record document; unknown fields and bad shapes are rejected."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != "record":
        raise StateFormatError("expected an object with kind 'record'")
    extra = set(doc) - _RECORD_KEYS
    if extra:
        raise StateFormatError(f"unknown fields: {sorted(extra)}")
    if _RECORD_KEYS - set(doc):
        raise StateFormatError(f"missing fields: {sorted(_RECORD_KEYS - set(doc))}")
    n, shots, seed = doc["n"], doc["shots"], doc["seed"]
    if type(n) is not int or n < 1:
        raise StateFormatError(f"'n' must be a positive integer, got {n!r}")
    if type(shots) is not int or shots < 1:
        raise StateFormatError(f"'shots' must be a positive integer, got {shots!r}")
    if type(seed) is not int:
        raise StateFormatError(f"'seed' must be an integer, got {seed!r}")
    raw = doc["counts"]
    if (
        not isinstance(raw, list)
        or len(raw) != n * n
        or not all(type(c) is int and c >= 0 for c in raw)
    ):
        raise StateFormatError("'counts' must be a row-major list of n^2 nonnegative integers")
    counts = np.array(raw, dtype=np.int64).reshape(n, n)
    if int(counts.sum()) != shots:
        raise StateFormatError(
            f"counts sum to {int(counts.sum())}, expected shots={shots}"
        )
    counts.setflags(write=False)
    return MeasurementRecord(n=n, counts=counts, shots=shots, seed=seed)


def write_record_text(record: MeasurementRecord) -> str:
    """Serialize a record to the canonical single-line JSON form."""
    doc = {
        "kind": "record",
        "n": int(record.n),
        "shots": int(record.shots),
        "seed": int(record.seed),
        "counts": [int(c) for c in np.asarray(record.counts).reshape(-1)],
    }
    return json.dumps(doc, allow_nan=False) + "\n"


def load_record(path) -> MeasurementRecord:
    """Read and parse a record file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_record_text(fh.read())


def save_record(record: MeasurementRecord, path) -> None:
    """Write a record to disk in canonical form."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_record_text(record))
