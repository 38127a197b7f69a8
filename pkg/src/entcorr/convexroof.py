"""Convex-roof extension of pure-state measures to mixed states.

A mixed state admits many ensembles rho = sum_i p_i |psi_i><psi_i|; the
roof value is the infimum of the ensemble-averaged pure-state measure.
Every candidate ensemble is parametrized through a left-unitary mixing of
the scaled eigenvectors,

    |psi~_i> = sum_j U_ij sqrt(mu_j) |v_j>,   U^dagger U = I_r,

with U built from a product of phased Givens rotations over an m x r
left-unitary manifold (r = rank, r <= m <= ensemble_cap).  The optimizer
is a seeded random-restart pattern search whose poll set mixes coordinate
moves, finite-difference-informed trial points and random directions; it
uses objective evaluations only.  Restart streams derive from
(seed, restart_index), so results do not depend on worker scheduling.

``two_qubit_concurrence_oracle`` provides the independent closed-form
check used by the test suite: the roof of the two-qubit squared
concurrence equals the oracle value squared.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InternalConsistencyError, ValidationError, WrongDimension
from .qstate import DensityMatrix, PureState, validate_pure
from .schmidt import RANK_TOL

_SYSY = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)

_MEASURES = {"e2": 0, "en": 1}

#: Ensemble members below this weight are dropped from reported results.
_WEIGHT_FLOOR = 1e-12

#: Objective values below this floor terminate a restart early.
_VALUE_FLOOR = 1e-14


def two_qubit_concurrence_oracle(rho: DensityMatrix) -> float:
    """Closed-form two-qubit concurrence max(0, s1 - s2 - s3 - s4).

    The s_i are the descending square roots of the eigenvalues of
    rho (sy x sy) rho^* (sy x sy), evaluated stably as the singular values
    of sqrt(rho) (sy x sy) sqrt(rho)^*.
    """
    if rho.dims != (2, 2):
        raise WrongDimension(f"two-qubit state required, got dims {rho.dims}")
    vals, vecs = np.linalg.eigh(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    root = (vecs * np.sqrt(vals)) @ vecs.conj().T
    flipped = root @ _SYSY @ root.conj()
    s = np.linalg.svd(flipped, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


@dataclass(frozen=True)
class RoofOptions:
    """Optimizer knobs; the defaults satisfy the library's accuracy tests."""

    restarts: int = 8
    seed: int = 0
    ensemble_cap: int | None = None
    conv_tol: float = 1e-7
    patience: int = 25
    max_iterations: int = 800
    step_init: float = 0.45
    threads: int = 1

    def check(self) -> None:
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.patience < 1:
            raise ValidationError("patience must be >= 1")
        if not (self.conv_tol > 0):
            raise ValidationError("conv_tol must be > 0")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not (self.step_init > 0):
            raise ValidationError("step_init must be > 0")
        if self.threads < 1:
            raise ValidationError("threads must be >= 1")


@dataclass(frozen=True)
class Decomposition:
    """A pure-state ensemble with strictly positive weights summing to 1."""

    weights: np.ndarray
    states: tuple[PureState, ...]

    def reconstruct(self) -> np.ndarray:
        """Density matrix sum_i w_i |psi_i><psi_i| of this ensemble."""
        dim = self.states[0].dim
        rho = np.zeros((dim, dim), dtype=np.complex128)
        for w, st in zip(self.weights, self.states):
            rho += w * np.outer(st.amplitudes, st.amplitudes.conj())
        return rho


@dataclass(frozen=True)
class RoofResult:
    """Best ensemble found, its average measure, and descent bookkeeping.

    ``descent_traces`` holds one non-increasing best-value series per
    restart; ``converged`` reports whether every restart met the patience
    criterion before hitting the iteration cap.
    """

    value: float
    decomposition: Decomposition
    iterations: int
    converged: bool
    restarts_used: int
    descent_traces: tuple[np.ndarray, ...]


def _pure_measure_value(amps: np.ndarray, d_a: int, d_b: int, measure_id: int) -> float:
    if measure_id == 0:
        tau = 2.0 * (amps[0] * amps[3] - amps[1] * amps[2])
        return float(tau.real**2 + tau.imag**2)
    mat = amps.reshape(d_a, d_b)
    gram = mat @ mat.conj().T
    n_eff = min(d_a, d_b)
    tr2 = float(np.sum(gram.real**2 + gram.imag**2))
    return n_eff / (n_eff - 1.0) * (1.0 - tr2)


class _RoofProblem:
    """Shared data for one optimization run."""

    def __init__(self, vt, m, d_a, d_b, measure_id):
        self.vt = np.ascontiguousarray(vt, dtype=np.complex128)
        self.m = int(m)
        self.r = self.vt.shape[0]
        self.d_a = int(d_a)
        self.d_b = int(d_b)
        self.measure_id = int(measure_id)
        self.pairs = np.array(
            [(i, j) for i in range(m) for j in range(i + 1, m)], dtype=np.int32
        ).reshape(-1, 2)
        self.n_pairs = self.pairs.shape[0]
        self.n_params = 2 * self.n_pairs + self.r

    def objective(self, params: np.ndarray) -> np.ndarray:
        params = np.atleast_2d(np.ascontiguousarray(params, dtype=np.float64))
        k = self.n_pairs
        theta = params[:, :k]
        phi = params[:, k : 2 * k]
        alpha = params[:, 2 * k :]
        rot_e = np.cos(phi) + 1j * np.sin(phi)
        col_phase = np.cos(alpha) + 1j * np.sin(alpha)
        return kernels.measure_batch(
            self.vt,
            self.m,
            self.d_a,
            self.d_b,
            self.pairs,
            np.cos(theta),
            np.sin(theta),
            rot_e,
            col_phase,
            self.measure_id,
        )

    def ensemble(self, x: np.ndarray) -> np.ndarray:
        """Unnormalized ensemble rows |psi~_i> for one parameter vector."""
        k = self.n_pairs
        theta, phi, alpha = x[:k], x[k : 2 * k], x[2 * k :]
        dim = self.vt.shape[1]
        work = np.zeros((self.m, dim), dtype=np.complex128)
        work[: self.r] = self.vt * (np.cos(alpha) + 1j * np.sin(alpha))[:, None]
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        phase = np.cos(phi) + 1j * np.sin(phi)
        for idx in range(k):
            i, j = int(self.pairs[idx, 0]), int(self.pairs[idx, 1])
            c = cos_t[idx]
            se = sin_t[idx] * phase[idx]
            wi = work[i].copy()
            wj = work[j].copy()
            work[i] = c * wi - se * wj
            work[j] = np.conj(se) * wi + c * wj
        return work


def _descend(problem: _RoofProblem, x0: np.ndarray, rng: np.random.Generator, opts: RoofOptions):
    n = problem.n_params
    x = x0.copy()
    f = float(problem.objective(x[None, :])[0])
    trace = [f]
    step = opts.step_init
    stall = 0
    iterations = 0
    converged = False
    eye = np.eye(n)
    last_disp = None
    while iterations < opts.max_iterations:
        iterations += 1
        rdir = rng.standard_normal((2, n))
        norms = np.linalg.norm(rdir, axis=1, keepdims=True)
        rdir /= np.where(norms > 0, norms, 1.0)
        polls = np.concatenate(
            [
                x[None, :] + step * eye,
                x[None, :] - step * eye,
                x[None, :] + step * rdir,
                x[None, :] - step * rdir,
            ]
        )
        f_polls = problem.objective(polls)
        f_plus, f_minus = f_polls[:n], f_polls[n : 2 * n]
        grad = (f_plus - f_minus) / (2.0 * step)
        curv = (f_plus + f_minus - 2.0 * f) / (step * step)
        newton = np.where(curv > 1e-12, -grad / np.maximum(curv, 1e-12), -np.sign(grad) * step)
        extras = [x + np.clip(newton, -4.0 * step, 4.0 * step)]
        gnorm = float(np.linalg.norm(grad))
        if gnorm > 0:
            extras.append(x - step * grad / gnorm)
            extras.append(x - 2.5 * step * grad / gnorm)
        if last_disp is not None:
            extras.append(x + last_disp)
            extras.append(x + 2.0 * last_disp)
        f_extras = problem.objective(np.stack(extras))
        f_all = np.concatenate([f_polls, f_extras])
        cand = np.concatenate([polls, np.stack(extras)])
        best = int(np.argmin(f_all))
        prev = f
        if f_all[best] < f:
            last_disp = cand[best] - x
            x = cand[best].copy()
            f = float(f_all[best])
            step = min(step * 1.4, opts.step_init * 2.0)
        else:
            last_disp = None
            step *= 0.5
        trace.append(f)
        if prev - f < opts.conv_tol:
            stall += 1
            if stall >= opts.patience:
                converged = True
                break
        else:
            stall = 0
        if f < _VALUE_FLOOR:
            converged = True
            break
    return f, x, iterations, converged, np.array(trace)


def _start_point(problem: _RoofProblem, rng: np.random.Generator, first: bool) -> np.ndarray:
    if first:
        return np.zeros(problem.n_params)
    k = problem.n_pairs
    theta = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, k)
    phi = rng.uniform(-math.pi, math.pi, k)
    alpha = rng.uniform(-math.pi, math.pi, problem.r)
    return np.concatenate([theta, phi, alpha])


def _decomposition_from_rows(rows: np.ndarray, dims, measure_id: int):
    p = np.sum(rows.real**2 + rows.imag**2, axis=1)
    keep = p > _WEIGHT_FLOOR
    p = p[keep]
    weights = p / p.sum()
    states = []
    for row in rows[keep]:
        states.append(validate_pure(row / np.linalg.norm(row), dims))
    value = 0.0
    for w, st in zip(weights, states):
        value += w * _pure_measure_value(st.amplitudes, dims[0], dims[1], measure_id)
    weights.setflags(write=False)
    return float(value), Decomposition(weights, tuple(states))


def convex_roof(
    rho: DensityMatrix, measure: str = "e2", options: RoofOptions | None = None
) -> RoofResult:
    """Minimize the ensemble-averaged pure-state measure over ensembles.

    ``measure`` selects the two-qubit squared concurrence (``e2``, dims
    [2, 2] only) or the normalized squared I-concurrence (``en``, dims
    [2, 2] or [3, 3]).  Deterministic for a fixed ``options.seed``; the
    thread count never changes results.
    """
    if measure not in _MEASURES:
        raise ValidationError(f"unknown measure {measure!r}, expected one of {sorted(_MEASURES)}")
    measure_id = _MEASURES[measure]
    if measure_id == 0 and rho.dims != (2, 2):
        raise WrongDimension(f"e2 roof requires dims (2, 2), got {rho.dims}")
    if measure_id == 1 and rho.dims not in ((2, 2), (3, 3)):
        raise WrongDimension(f"en roof requires dims (2, 2) or (3, 3), got {rho.dims}")
    opts = options or RoofOptions()
    opts.check()

    vals, vecs = np.linalg.eigh(rho.matrix)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    rank = int(np.sum(vals > RANK_TOL))
    if rank < 1:
        raise InternalConsistencyError("density matrix has numerically empty spectrum")
    mu = vals[:rank] / float(vals[:rank].sum())
    dims = rho.dims

    if rank == 1:
        state = validate_pure(vecs[:, 0], dims)
        value = _pure_measure_value(state.amplitudes, dims[0], dims[1], measure_id)
        weights = np.array([1.0])
        weights.setflags(write=False)
        return RoofResult(
            value=float(value),
            decomposition=Decomposition(weights, (state,)),
            iterations=0,
            converged=True,
            restarts_used=0,
            descent_traces=(),
        )

    m = opts.ensemble_cap if opts.ensemble_cap is not None else rank * rank
    if m < rank:
        raise ValidationError(f"ensemble_cap {m} is below the state rank {rank}")
    vt = (vecs[:, :rank] * np.sqrt(mu)).T
    problem = _RoofProblem(vt, m, dims[0], dims[1], measure_id)

    def run_one(restart_index: int):
        rng = np.random.Generator(
            np.random.Philox(key=kernels.derive_seed(opts.seed, restart_index))
        )
        x0 = _start_point(problem, rng, first=restart_index == 0)
        return _descend(problem, x0, rng, opts)

    indices = range(opts.restarts)
    if opts.threads > 1:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            runs = list(pool.map(run_one, indices))
    else:
        runs = [run_one(i) for i in indices]

    best_idx = min(range(len(runs)), key=lambda i: (runs[i][0], i))
    _, best_x, _, _, _ = runs[best_idx]
    total_iterations = sum(run[2] for run in runs)
    all_converged = all(run[3] for run in runs)
    traces = tuple(run[4] for run in runs)

    value, decomposition = _decomposition_from_rows(
        problem.ensemble(best_x), dims, measure_id
    )
    # The eigendecomposition is itself a valid ensemble; never report worse.
    eig_value, eig_decomposition = _decomposition_from_rows(vt.copy(), dims, measure_id)
    if eig_value < value:
        value, decomposition = eig_value, eig_decomposition
    if value > eig_value + 1e-9:
        raise InternalConsistencyError(
            f"roof value {value!r} exceeds eigendecomposition average {eig_value!r}"
        )

    return RoofResult(
        value=float(value),
        decomposition=decomposition,
        iterations=total_iterations,
        converged=all_converged,
        restarts_used=opts.restarts,
        descent_traces=traces,
    )
