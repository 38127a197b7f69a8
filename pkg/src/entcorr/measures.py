"""Entanglement measures built from correlation sums and closed forms.

Two routes to the same quantities:

* ``e2_correlation_sum``: the plain sum of all four correlation deviations
  of a two-dimensional Schmidt basis, equal to 4 lambda (1 - lambda), the
  squared concurrence of the state.
* ``en_correlation_sum``: the deviation sum normalized by N / (2 (N - 1)),
  which maps onto ``en_closed_form``'s N / (N - 1) (1 - sum lambda_i^2),
  the normalized squared I-concurrence.  Both reach 1 exactly on the
  maximally entangled state of any N and 0 on products.

``three_tangle`` combines the pair concurrences of a three-qubit pure
state with the one-vs-rest measure into the residual tangle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .convexroof import two_qubit_concurrence_oracle
from .correlations import CorrelationTable
from .errors import InternalConsistencyError, WrongDimension
from .qstate import DensityMatrix, PureState, validate_pure
from .schmidt import SchmidtDecomposition, schmidt_decompose

#: Measure values may stray outside [0, 1] by at most this much before the
#: library treats its own numerics as broken.
CLAMP_TOL = 1e-9


class MeasureMethod(enum.Enum):
    """How an entanglement value was obtained."""

    CORRELATION_SUM = "correlation_sum"
    CLOSED_FORM = "closed_form"
    CONVEX_ROOF = "convex_roof"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class EntanglementValue:
    """A measure value in [0, 1] with its provenance."""

    value: float
    method: MeasureMethod
    n: int


def clamp_unit_interval(value: float, context: str = "measure") -> float:
    """Snap values within CLAMP_TOL of [0, 1] onto the interval.

    Larger excursions are internal errors, never silently hidden.
    """
    v = float(value)
    if v < 0.0:
        if v < -CLAMP_TOL:
            raise InternalConsistencyError(f"{context} value {v!r} is below 0")
        return 0.0
    if v > 1.0:
        if v > 1.0 + CLAMP_TOL:
            raise InternalConsistencyError(f"{context} value {v!r} exceeds 1")
        return 1.0
    return v


def e2_correlation_sum(table: CorrelationTable) -> EntanglementValue:
    """Sum of the four correlation deviations of a two-basis table."""
    if table.n != 2:
        raise WrongDimension(f"two-dimensional Schmidt basis required, got n={table.n}")
    value = clamp_unit_interval(float(np.sum(table.delta)), "e2")
    return EntanglementValue(value, MeasureMethod.CORRELATION_SUM, 2)


def en_correlation_sum(table: CorrelationTable) -> EntanglementValue:
    """Correlation-deviation sum normalized by N / (2 (N - 1))."""
    if table.n < 2:
        raise WrongDimension(f"Schmidt basis of size >= 2 required, got n={table.n}")
    n = table.n
    value = n / (2.0 * (n - 1.0)) * float(np.sum(table.delta))
    return EntanglementValue(
        clamp_unit_interval(value, "en"), MeasureMethod.CORRELATION_SUM, n
    )


def en_closed_form(dec: SchmidtDecomposition) -> EntanglementValue:
    """N / (N - 1) (1 - sum lambda_i^2) from the Schmidt coefficients."""
    n = dec.n
    if n < 2:
        raise WrongDimension(f"Schmidt basis of size >= 2 required, got n={n}")
    lam = dec.lambdas
    value = n / (n - 1.0) * (1.0 - float(np.sum(lam * lam)))
    return EntanglementValue(
        clamp_unit_interval(value, "en"), MeasureMethod.CLOSED_FORM, n
    )


@dataclass(frozen=True)
class ThreeTangleDetail:
    """Residual tangle with its three ingredients."""

    value: float
    c2_first_vs_rest: float
    c2_pair_ab: float
    c2_pair_ac: float


def _pair_density(tensor: np.ndarray, keep_third: bool) -> DensityMatrix:
    if keep_third:
        rho = np.einsum("abc,xby->acxy", tensor, tensor.conj()).reshape(4, 4)
    else:
        rho = np.einsum("abc,xyc->abxy", tensor, tensor.conj()).reshape(4, 4)
    rho = 0.5 * (rho + rho.conj().T)
    rho.setflags(write=False)
    return DensityMatrix(rho, (2, 2))


def three_tangle_detail(state: PureState) -> ThreeTangleDetail:
    """Residual tangle of a three-qubit pure state, with components.

    The one-vs-rest squared concurrence of the first qubit minus the
    squared pair concurrences with each remaining qubit.  Nonnegative for
    every state; 1 on the maximally 3-way entangled state, 0 on pairwise
    and product states.
    """
    if state.dims != (2, 2, 2):
        raise WrongDimension(f"three qubits required, got dims {state.dims}")
    tensor = state.amplitudes.reshape(2, 2, 2)
    split = validate_pure(state.amplitudes, (2, 4))
    c2_split = en_closed_form(schmidt_decompose(split)).value
    c_ab = two_qubit_concurrence_oracle(_pair_density(tensor, keep_third=False))
    c_ac = two_qubit_concurrence_oracle(_pair_density(tensor, keep_third=True))
    tau = c2_split - c_ab * c_ab - c_ac * c_ac
    return ThreeTangleDetail(
        value=clamp_unit_interval(tau, "three_tangle"),
        c2_first_vs_rest=c2_split,
        c2_pair_ab=c_ab * c_ab,
        c2_pair_ac=c_ac * c_ac,
    )


def three_tangle(state: PureState) -> float:
    """Residual tangle of a three-qubit pure state (see detail variant)."""
    return three_tangle_detail(state).value
