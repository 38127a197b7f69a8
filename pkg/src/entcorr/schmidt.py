"""Schmidt decomposition of bipartite pure states.

A state |psi> on dims [M, M'] is factored as

    |psi> = sum_i sqrt(lambda_i) |u_i> (x) |v_i>,    i = 1 .. N = min(M, M')

with lambdas sorted descending and both bases orthonormal.  The global
phase of each product term is fixed by making the largest-magnitude entry
of every ``basis_a`` column real and positive, which makes the
decomposition deterministic and the reconstruction equal to the input
without any leftover phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, WrongDimension
from .qstate import PureState

#: Schmidt coefficients at or below this threshold do not count toward the
#: Schmidt rank and mark unsupported basis directions downstream.
RANK_TOL = 1e-12


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Result of ``schmidt_decompose``.

    Attributes
    ----------
    lambdas:
        Squared Schmidt coefficients, descending, summing to 1.
    basis_a, basis_b:
        Orthonormal Schmidt bases as column matrices (M x N and M' x N).
    dims:
        The (M, M') subsystem dimensions of the decomposed state.
    """

    lambdas: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    dims: tuple[int, int]

    @property
    def n(self) -> int:
        return int(self.lambdas.size)

    def reconstruct(self) -> np.ndarray:
        """Flat amplitude vector sum_i sqrt(lambda_i) u_i (x) v_i."""
        coeff = np.sqrt(self.lambdas)
        mat = (self.basis_a * coeff) @ self.basis_b.T
        return mat.reshape(-1)


def schmidt_decompose(state: PureState) -> SchmidtDecomposition:
    """Decompose a bipartite pure state via singular values.

    Raises ``WrongDimension`` for states with other than two subsystems.
    """
    if len(state.dims) != 2:
        raise WrongDimension(
            f"Schmidt decomposition needs a bipartite state, got {len(state.dims)} subsystems"
        )
    m, mp = state.dims
    amp = state.amplitudes.reshape(m, mp)
    u, s, vh = np.linalg.svd(amp, full_matrices=False)
    lambdas = s * s
    total = float(lambdas.sum())
    if abs(total - 1.0) > 1e-9:
        raise InternalConsistencyError(
            f"Schmidt coefficients sum to {total!r}, expected 1"
        )
    basis_a = u
    basis_b = vh.T.copy()
    for i in range(lambdas.size):
        col = basis_a[:, i]
        top = int(np.argmax(np.abs(col)))
        mag = abs(col[top])
        phase = col[top] / mag
        basis_a[:, i] = col * phase.conjugate()
        basis_b[:, i] = basis_b[:, i] * phase
    for arr in (lambdas, basis_a, basis_b):
        arr.setflags(write=False)
    return SchmidtDecomposition(lambdas, basis_a, basis_b, (m, mp))


def schmidt_rank(dec: SchmidtDecomposition) -> int:
    """Number of Schmidt coefficients above ``RANK_TOL``; 1 means product."""
    return int(np.sum(dec.lambdas > RANK_TOL))
