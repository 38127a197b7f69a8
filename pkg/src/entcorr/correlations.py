"""Outcome statistics of local measurements in the Schmidt bases.

For a bipartite pure state written in its Schmidt bases, measuring each
side in its own basis gives marginals P(i_A) = P(i_B) = lambda_i, joint
probabilities P(i_A, j_B) = delta_ij lambda_j, and conditionals
P(i_A | j_B) = delta_ij on columns with nonzero marginal.  The deviation
table

    Delta(i, j) = |P(i_A, j_B) - P(i_A) P(j_B)|

is always computed from the joint form; the conditional form agrees with
it wherever the conditional is defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .schmidt import RANK_TOL, SchmidtDecomposition


@dataclass(frozen=True)
class CorrelationTable:
    """Measurement statistics in the Schmidt bases.

    ``conditional`` is a masked array: columns whose marginal P(j_B) is
    zero (at rank tolerance) carry an explicit undefined marker rather
    than 0 or NaN.
    """

    n: int
    local_a: np.ndarray
    local_b: np.ndarray
    joint: np.ndarray
    conditional: np.ma.MaskedArray
    delta: np.ndarray


def correlation_table(dec: SchmidtDecomposition) -> CorrelationTable:
    """Build the full correlation table from a Schmidt decomposition."""
    lam = np.asarray(dec.lambdas, dtype=np.float64)
    n = lam.size
    local = lam.copy()
    joint = np.diag(lam)
    supported = lam > RANK_TOL
    cond_data = np.where(supported[None, :], np.eye(n), 0.0)
    conditional = np.ma.MaskedArray(
        cond_data, mask=np.broadcast_to(~supported[None, :], (n, n)).copy()
    )
    delta = np.abs(joint - np.outer(local, local))
    for arr in (local, joint, delta):
        arr.setflags(write=False)
    return CorrelationTable(
        n=n,
        local_a=local,
        local_b=local,
        joint=joint,
        conditional=conditional,
        delta=delta,
    )


def is_factorizable(table: CorrelationTable, tol: float) -> bool:
    """True when every correlation deviation is at most ``tol``.

    Equivalent to Schmidt rank 1 when ``tol`` matches the rank tolerance
    scale; the threshold is explicit because callers trade off between
    statistical noise and sensitivity.
    """
    if not np.isfinite(tol) or tol < 0:
        raise ValidationError(f"tolerance must be finite and >= 0, got {tol!r}")
    return bool(np.max(table.delta) <= tol)
