"""Polarization-correlation expectations and CHSH optimization.

An analyzer setting is a single angle; setting ``t`` measures the +/-1
observable cos(2t) sz + sin(2t) sx.  ``joint_expectation`` evaluates the
two-party correlation by the trace rule; ``chsh`` combines four of them
into s = E(a,b) + E(a,b') + E(a',b) - E(a',b'); ``chsh_maximize`` scans a
uniform angle grid and refines the best cell with a deterministic local
search.  Quantum mechanics bounds |s| by 2 sqrt(2); separable states stay
at or below 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InternalConsistencyError,
    NonFinite,
    ValidationError,
    WrongDimension,
)
from .qstate import DensityMatrix, PureState

#: Quantum ceiling for |s|.
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SX = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class MeasurementSetting:
    """One analyzer angle, canonicalized to [0, pi).

    The observable is pi-periodic in the angle, so canonicalization never
    changes any expectation value.
    """

    angle: float

    def __post_init__(self) -> None:
        a = float(self.angle)
        if not math.isfinite(a):
            raise NonFinite(f"angle must be finite, got {a!r}")
        a = math.fmod(a, math.pi)
        if a < 0.0:
            a += math.pi
        if a >= math.pi:
            a = 0.0
        object.__setattr__(self, "angle", a)

    def observable(self) -> np.ndarray:
        """The 2x2 matrix cos(2 angle) sz + sin(2 angle) sx."""
        return math.cos(2.0 * self.angle) * _SZ + math.sin(2.0 * self.angle) * _SX


@dataclass(frozen=True)
class ChshValue:
    """A CHSH combination s with the settings (a, a', b, b') it came from.

    ``chsh`` stores the signed combination; ``chsh_maximize`` stores the
    maximal |s| it found.  Construction asserts the quantum ceiling
    |s| <= 2 sqrt(2) as a sanity check.
    """

    s: float
    settings: tuple[MeasurementSetting, MeasurementSetting, MeasurementSetting, MeasurementSetting]

    def __post_init__(self):
        if abs(self.s) > TSIRELSON_BOUND + 1e-9:
            raise InternalConsistencyError(f"|s| = {abs(self.s)!r} exceeds the quantum bound")


def _as_setting(x) -> MeasurementSetting:
    return x if isinstance(x, MeasurementSetting) else MeasurementSetting(float(x))


def _require_two_qubits(state) -> np.ndarray:
    if isinstance(state, PureState):
        if state.dims != (2, 2):
            raise WrongDimension(f"two-qubit state required, got dims {state.dims}")
        return np.outer(state.amplitudes, state.amplitudes.conj())
    if isinstance(state, DensityMatrix):
        if state.dims != (2, 2):
            raise WrongDimension(f"two-qubit state required, got dims {state.dims}")
        return state.matrix
    raise ValidationError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def joint_expectation(state, setting_a, setting_b) -> float:
    """E(a, b) = Tr[rho (A(a) x B(b))] for a two-qubit state."""
    rho = _require_two_qubits(state)
    sa = _as_setting(setting_a)
    sb = _as_setting(setting_b)
    op = np.kron(sa.observable(), sb.observable())
    return float(np.trace(rho @ op).real)


def chsh(state, a, a_prime, b, b_prime) -> ChshValue:
    """Signed s = E(a,b) + E(a,b') + E(a',b) - E(a',b')."""
    settings = tuple(_as_setting(x) for x in (a, a_prime, b, b_prime))
    s = (
        joint_expectation(state, settings[0], settings[2])
        + joint_expectation(state, settings[0], settings[3])
        + joint_expectation(state, settings[1], settings[2])
        - joint_expectation(state, settings[1], settings[3])
    )
    return ChshValue(s=s, settings=settings)


def _correlation_kernel(rho: np.ndarray) -> np.ndarray:
    """2x2 matrix K with E(a, b) = u(a)^T K u(b), u(t) = (cos 2t, sin 2t)."""
    paulis = (_SZ, _SX)
    k = np.empty((2, 2))
    for i, pa in enumerate(paulis):
        for j, pb in enumerate(paulis):
            k[i, j] = float(np.trace(rho @ np.kron(pa, pb)).real)
    return k


def _s_value(kmat: np.ndarray, angles: np.ndarray) -> float:
    u = np.stack([np.cos(2.0 * angles), np.sin(2.0 * angles)], axis=1)
    ka = kmat @ u[2]
    kb = kmat @ u[3]
    return float(u[0] @ ka + u[0] @ kb + u[1] @ ka - u[1] @ kb)


def chsh_maximize(state, grid_density: int = 16, refine: bool = True) -> ChshValue:
    """Maximal |s| over analyzer settings, found by grid scan plus descent.

    The grid is uniform over [0, pi) in each of the four angles; ties are
    broken toward the lexicographically smallest (a, a', b, b') tuple.
    Deterministic: repeated calls return identical results.
    """
    grid_density = int(grid_density)
    if grid_density < 8:
        raise ValidationError(f"grid_density must be >= 8, got {grid_density}")
    rho = _require_two_qubits(state)
    kmat = _correlation_kernel(rho)
    grid = np.arange(grid_density) * (math.pi / grid_density)
    u = np.stack([np.cos(2.0 * grid), np.sin(2.0 * grid)], axis=1)
    corr = u @ kmat @ u.T  # corr[x, y] = E(grid[x], grid[y])

    best_val = -1.0
    best_idx = (0, 0, 0, 0)
    for ia in range(grid_density):
        block = (
            corr[ia][None, :, None]
            + corr[ia][None, None, :]
            + corr[:, :, None]
            - corr[:, None, :]
        )
        np.abs(block, out=block)
        flat = int(np.argmax(block))
        val = float(block.reshape(-1)[flat])
        if val > best_val + 0.0:
            best_val = val
            iap, ib, ibp = np.unravel_index(flat, block.shape)
            best_idx = (ia, int(iap), int(ib), int(ibp))

    angles = np.array([grid[i] for i in best_idx])
    if refine:
        step = math.pi / (2.0 * grid_density)
        current = abs(_s_value(kmat, angles))
        while step > 1e-9:
            moved = False
            for axis in range(4):
                for sign in (1.0, -1.0):
                    trial = angles.copy()
                    trial[axis] += sign * step
                    val = abs(_s_value(kmat, trial))
                    if val > current:
                        angles, current = trial, val
                        moved = True
            if not moved:
                step *= 0.5

    settings = tuple(MeasurementSetting(float(a)) for a in angles)
    return ChshValue(s=abs(chsh(state, *settings).s), settings=settings)
