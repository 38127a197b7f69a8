"""Quantum state carriers, validation, and the text file format.

All coefficients are carried as numpy ``complex128``; the containers are
frozen dataclasses holding read-only arrays, so instances can be shared
across threads freely.

State files are UTF-8 JSON documents with a fixed key set:

* pure states:  ``{"kind": "pure", "dims": [...], "data": [[re, im], ...]}``
  with ``data`` flat in row-major order (for dims ``[M, M']`` the amplitude
  of ``|i_A, i_B>`` sits at index ``i_A * M' + i_B``),
* mixed states: ``{"kind": "mixed", "dims": [M, M'], "data": [[[re, im],
  ...], ...]}`` with one inner list per matrix row.

Numbers are plain JSON decimals (up to 17 significant digits); unknown
fields are rejected.  ``write_state_text`` emits a canonical single-line
form that round-trips byte-identically through ``parse_state_text``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFinite,
    NotHermitian,
    NotNormalized,
    NotPositive,
    StateFormatError,
    TraceNotOne,
)

#: Acceptance window around unit norm / unit trace; states inside it are
#: renormalized exactly, states outside it are rejected.
NORM_TOL = 1e-9

#: Entrywise Hermiticity tolerance for density matrices.
HERM_TOL = 1e-9

#: Density-matrix eigenvalues may undershoot zero by at most this much.
EIG_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """A normalized pure state on two or three subsystems.

    Attributes
    ----------
    amplitudes:
        Flat complex128 array in row-major subsystem order, unit norm.
    dims:
        Subsystem dimensions, length 2 or 3.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def density(self) -> "DensityMatrix":
        """Rank-one density matrix |psi><psi| of this state."""
        if len(self.dims) != 2:
            raise DimensionMismatch("density() requires a bipartite state")
        rho = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(_frozen(rho), self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated bipartite density matrix.

    Attributes
    ----------
    matrix:
        Hermitian positive-semidefinite complex128 matrix with unit trace.
    dims:
        Subsystem dimensions, length 2.
    """

    matrix: np.ndarray
    dims: tuple[int, int]

    @property
    def dim(self) -> int:
        return int(self.dims[0] * self.dims[1])


def _check_dims(dims, allowed_lengths) -> tuple[int, ...]:
    try:
        out = tuple(int(d) for d in dims)
    except (TypeError, ValueError):
        raise DimensionMismatch(f"dims must be a sequence of integers, got {dims!r}")
    if len(out) not in allowed_lengths:
        raise DimensionMismatch(
            f"expected {' or '.join(map(str, allowed_lengths))} subsystems, got {len(out)}"
        )
    if any(d < 1 for d in out):
        raise DimensionMismatch(f"subsystem dimensions must be >= 1, got {out}")
    return out


def validate_pure(amplitudes, dims) -> PureState:
    """Validate amplitudes against dims and return a normalized PureState.

    The squared norm must lie within ``NORM_TOL`` of 1; inside that window
    the amplitudes are rescaled to exact unit norm (states already at unit
    norm to machine precision are passed through unchanged, which makes the
    operation idempotent).  Violations raise ``DimensionMismatch``,
    ``NonFinite`` or ``NotNormalized``.
    """
    out = _check_dims(dims, (2, 3))
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
    expected = int(np.prod(out))
    if amps.size != expected:
        raise DimensionMismatch(
            f"dims {out} imply {expected} amplitudes, got {amps.size}"
        )
    if not np.all(np.isfinite(amps.view(np.float64))):
        raise NonFinite("amplitudes contain NaN or infinite entries")
    norm2 = float(np.sum(amps.real**2 + amps.imag**2))
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"squared norm {norm2!r} deviates from 1 beyond {NORM_TOL}")
    if abs(norm2 - 1.0) > 4 * np.finfo(np.float64).eps:
        amps /= math.sqrt(norm2)
    return PureState(_frozen(amps), out)


def validate_density(matrix, dims) -> DensityMatrix:
    """Validate a density matrix against bipartite dims.

    Checks, in order: shape against dims, finiteness, Hermiticity within
    ``HERM_TOL`` (entrywise), trace within ``NORM_TOL`` of 1, and spectrum
    bounded below by ``-EIG_TOL``.  Accepted matrices are canonicalized by
    exact symmetrization and trace rescaling.
    """
    out = _check_dims(dims, (2,))
    rho = np.asarray(matrix, dtype=np.complex128).copy()
    d = int(np.prod(out))
    if rho.shape != (d, d):
        raise DimensionMismatch(f"dims {out} imply a {d}x{d} matrix, got {rho.shape}")
    if not np.all(np.isfinite(rho.view(np.float64))):
        raise NonFinite("matrix contains NaN or infinite entries")
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_dev > HERM_TOL:
        raise NotHermitian(f"max |rho - rho^dagger| = {herm_dev!r} exceeds {HERM_TOL}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > NORM_TOL:
        raise TraceNotOne(f"trace {tr!r} deviates from 1 beyond {NORM_TOL}")
    rho = 0.5 * (rho + rho.conj().T)
    eigmin = float(np.linalg.eigvalsh(rho)[0])
    if eigmin < -EIG_TOL:
        raise NotPositive(f"smallest eigenvalue {eigmin!r} is below -{EIG_TOL}")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > 4 * np.finfo(np.float64).eps:
        rho /= tr
    return DensityMatrix(_frozen(rho), out)


def purity(state: DensityMatrix) -> float:
    """Tr(rho^2); equals 1 exactly for rank-one (pure) density matrices.

    Used to route pure-like mixed inputs to pure-state code paths.
    """
    rho = state.matrix
    return float(np.sum(rho.real**2 + rho.imag**2))


def dominant_eigenvector(state: DensityMatrix) -> PureState:
    """Extract the top eigenvector of a purity-one density matrix."""
    if purity(state) < 1.0 - NORM_TOL:
        raise NotNormalized(
            "density matrix is genuinely mixed; no dominant pure state"
        )
    vals, vecs = np.linalg.eigh(state.matrix)
    return validate_pure(vecs[:, -1], state.dims)


# --- text format ------------------------------------------------------------

_STATE_KEYS = {"kind", "dims", "data"}


def _reject_constant(token: str):
    raise StateFormatError(f"non-finite number token {token!r} is not allowed")


def _load_document(text: str) -> dict:
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFormatError("top level must be an object")
    kind = doc.get("kind")
    if not isinstance(kind, str):
        raise StateFormatError("missing or non-string 'kind' field")
    return doc


def _as_int_list(value, field: str) -> list[int]:
    if not isinstance(value, list) or not all(type(v) is int for v in value):
        raise StateFormatError(f"'{field}' must be a list of integers")
    return value


def _as_pair(entry) -> complex:
    if (
        not isinstance(entry, list)
        or len(entry) != 2
        or not all(type(v) in (int, float) for v in entry)
    ):
        raise StateFormatError(f"expected [re, im] number pair, got {entry!r}")
    return complex(float(entry[0]), float(entry[1]))


def parse_state_text(text: str):
    """Parse a state document; returns PureState or DensityMatrix.

    Unknown fields, wrong kinds, non-finite tokens and shape mismatches all
    raise ``StateFormatError``; the numeric contracts of ``validate_pure`` /
    ``validate_density`` apply afterwards.
    """
    doc = _load_document(text)
    kind = doc["kind"]
    if kind not in ("pure", "mixed"):
        raise StateFormatError(f"kind {kind!r} is not a state (expected pure|mixed)")
    extra = set(doc) - _STATE_KEYS
    if extra:
        raise StateFormatError(f"unknown fields: {sorted(extra)}")
    if _STATE_KEYS - set(doc):
        raise StateFormatError(f"missing fields: {sorted(_STATE_KEYS - set(doc))}")
    dims = _as_int_list(doc["dims"], "dims")
    data = doc["data"]
    if not isinstance(data, list):
        raise StateFormatError("'data' must be a list")
    if kind == "pure":
        amps = np.array([_as_pair(e) for e in data], dtype=np.complex128)
        return validate_pure(amps, dims)
    d = int(np.prod(dims)) if dims else 0
    if len(data) != d or any(
        not isinstance(row, list) or len(row) != d for row in data
    ):
        raise StateFormatError(f"dims {dims} imply a {d}x{d} 'data' matrix")
    rho = np.array(
        [[_as_pair(e) for e in row] for row in data], dtype=np.complex128
    )
    return validate_density(rho, dims)


def _num(x: float):
    # json rejects bare NaN/inf on our settings; map -0.0 to 0.0 so that
    # canonical output is unique.
    if x == 0.0:
        return 0.0
    return float(x)


def write_state_text(state) -> str:
    """Serialize a state to the canonical single-line JSON form."""
    if isinstance(state, PureState):
        doc = {
            "kind": "pure",
            "dims": list(state.dims),
            "data": [[_num(a.real), _num(a.imag)] for a in state.amplitudes],
        }
    elif isinstance(state, DensityMatrix):
        doc = {
            "kind": "mixed",
            "dims": list(state.dims),
            "data": [
                [[_num(e.real), _num(e.imag)] for e in row] for row in state.matrix
            ],
        }
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return json.dumps(doc, allow_nan=False) + "\n"


def load_state(path):
    """Read and parse a state file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_state_text(fh.read())


def save_state(state, path) -> None:
    """Write a state to disk in canonical form."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_state_text(state))
