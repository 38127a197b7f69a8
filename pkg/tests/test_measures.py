import numpy as np
import pytest

import entcorr as ec
from conftest import random_product, random_pure, random_unitary, schmidt_state


def table_for(lams, dims=None):
    n = len(lams)
    dims = dims or (n, n)
    return ec.correlation_table(ec.schmidt_decompose(schmidt_state(lams, dims)))


def hyperdeterminant_tangle(amps):
    """Independent 3-tangle oracle: tau = 4 |Det(a)| via Cayley's formula."""
    a = np.asarray(amps, dtype=complex).reshape(2, 2, 2)
    a000, a001, a010, a011 = a[0, 0, 0], a[0, 0, 1], a[0, 1, 0], a[0, 1, 1]
    a100, a101, a110, a111 = a[1, 0, 0], a[1, 0, 1], a[1, 1, 0], a[1, 1, 1]
    d1 = a000**2 * a111**2 + a001**2 * a110**2 + a010**2 * a101**2 + a100**2 * a011**2
    d2 = (
        a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001
    )
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


def test_e2_frozen_values():
    assert abs(ec.e2_correlation_sum(table_for([0.5, 0.5])).value - 1.0) <= 1e-12
    assert abs(ec.e2_correlation_sum(table_for([1.0, 0.0])).value - 0.0) <= 1e-12
    assert abs(ec.e2_correlation_sum(table_for([0.25, 0.75])).value - 0.75) <= 1e-12


def test_e2_requires_two_dimensional_table():
    with pytest.raises(ec.WrongDimension):
        ec.e2_correlation_sum(table_for([0.5, 0.3, 0.2]))


def test_e2_metadata():
    v = ec.e2_correlation_sum(table_for([0.5, 0.5]))
    assert v.method == ec.MeasureMethod.CORRELATION_SUM
    assert v.n == 2


def test_en_frozen_values():
    third = 1.0 / 3.0
    assert abs(ec.en_correlation_sum(table_for([third] * 3)).value - 1.0) <= 1e-9
    assert abs(ec.en_correlation_sum(table_for([1.0, 0.0, 0.0])).value - 0.0) <= 1e-12
    assert abs(ec.en_correlation_sum(table_for([0.5, 0.3, 0.2])).value - 0.93) <= 1e-12


def test_en_closed_form_frozen_values():
    dec = ec.schmidt_decompose(schmidt_state([0.5, 0.5], (2, 2)))
    assert abs(ec.en_closed_form(dec).value - 1.0) <= 1e-12
    dec = ec.schmidt_decompose(schmidt_state([1.0, 0.0], (2, 2)))
    assert abs(ec.en_closed_form(dec).value - 0.0) <= 1e-12
    dec = ec.schmidt_decompose(schmidt_state([0.7, 0.3], (2, 2)))
    assert abs(ec.en_closed_form(dec).value - 0.84) <= 1e-12


def test_en_rejects_one_dimensional_factor():
    st = ec.validate_pure(np.array([1.0, 0.0, 0.0]), (1, 3))
    dec = ec.schmidt_decompose(st)
    with pytest.raises(ec.WrongDimension):
        ec.en_closed_form(dec)
    with pytest.raises(ec.WrongDimension):
        ec.en_correlation_sum(ec.correlation_table(dec))


def test_sum_equals_closed_form(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        lams = np.sort(rng.dirichlet(np.ones(n)))[::-1]
        dec = ec.schmidt_decompose(schmidt_state(lams, (n, n)))
        a = ec.en_correlation_sum(ec.correlation_table(dec)).value
        b = ec.en_closed_form(dec).value
        assert abs(a - b) <= 1e-9


def test_local_unitary_invariance(rng):
    for _ in range(50):
        st = random_pure(rng, (3, 3))
        base = ec.en_closed_form(ec.schmidt_decompose(st)).value
        ua, ub = random_unitary(rng, 3), random_unitary(rng, 3)
        rotated = ec.validate_pure(np.kron(ua, ub) @ st.amplitudes, (3, 3))
        assert abs(ec.en_closed_form(ec.schmidt_decompose(rotated)).value - base) <= 1e-9


def test_extremes(rng):
    for _ in range(50):
        st = random_product(rng, (3, 3))
        assert ec.en_closed_form(ec.schmidt_decompose(st)).value <= 1e-9
    for n in (2, 3, 4):
        dec = ec.schmidt_decompose(schmidt_state([1.0 / n] * n, (n, n)))
        assert abs(ec.en_closed_form(dec).value - 1.0) <= 1e-9


def test_two_qubit_consistency(rng):
    for _ in range(200):
        st = random_pure(rng, (2, 2))
        dec = ec.schmidt_decompose(st)
        lam = float(dec.lambdas[0])
        truth = 4.0 * lam * (1.0 - lam)
        assert abs(ec.e2_correlation_sum(ec.correlation_table(dec)).value - truth) <= 1e-9
        assert abs(ec.en_closed_form(dec).value - truth) <= 1e-9


def test_three_tangle_frozen_states():
    ghz = ec.validate_pure(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2), (2, 2, 2))
    assert abs(ec.three_tangle(ghz) - 1.0) <= 1e-9
    w = ec.validate_pure(np.array([0, 1, 1, 0, 1, 0, 0, 0]) / np.sqrt(3), (2, 2, 2))
    assert abs(ec.three_tangle(w) - 0.0) <= 1e-9
    prod = ec.validate_pure(np.array([1, 0, 0, 0, 0, 0, 0, 0]), (2, 2, 2))
    assert abs(ec.three_tangle(prod) - 0.0) <= 1e-9


def test_three_tangle_w_state_detail():
    # W state: each pair concurrence is 2/3, one-vs-rest C^2 is 8/9
    w = ec.validate_pure(np.array([0, 1, 1, 0, 1, 0, 0, 0]) / np.sqrt(3), (2, 2, 2))
    detail = ec.three_tangle_detail(w)
    assert abs(detail.c2_first_vs_rest - 8.0 / 9.0) <= 1e-9
    assert abs(detail.c2_pair_ab - 4.0 / 9.0) <= 1e-9
    assert abs(detail.c2_pair_ac - 4.0 / 9.0) <= 1e-9
    assert abs(detail.value) <= 1e-9


def test_three_tangle_against_hyperdeterminant(rng):
    for _ in range(200):
        st = random_pure(rng, (2, 2, 2))
        tau = ec.three_tangle(st)
        oracle = hyperdeterminant_tangle(st.amplitudes)
        assert abs(tau - oracle) <= 1e-9


def test_three_tangle_nonnegative(rng):
    for _ in range(1000):
        st = random_pure(rng, (2, 2, 2))
        assert ec.three_tangle(st) >= -1e-9


def test_three_tangle_rejects_wrong_dims():
    st = ec.validate_pure(np.array([1, 0, 0, 0]), (2, 2))
    with pytest.raises(ec.WrongDimension):
        ec.three_tangle(st)
    st = random_pure(np.random.default_rng(0), (2, 2, 3))
    with pytest.raises(ec.WrongDimension):
        ec.three_tangle(st)


def test_clamp_unit_interval():
    assert ec.clamp_unit_interval(-5e-10, "test") == 0.0
    assert ec.clamp_unit_interval(1.0 + 5e-10, "test") == 1.0
    assert ec.clamp_unit_interval(0.5, "test") == 0.5
    with pytest.raises(ec.InternalConsistencyError):
        ec.clamp_unit_interval(-1e-6, "test")
    with pytest.raises(ec.InternalConsistencyError):
        ec.clamp_unit_interval(1.1, "test")
