import numpy as np
import pytest

import entcorr as ec
from conftest import random_pure, schmidt_state


def table_for(lams, dims=None):
    lams = np.asarray(lams, dtype=float)
    n = len(lams)
    dims = dims or (n, n)
    return ec.correlation_table(ec.schmidt_decompose(schmidt_state(lams, dims)))


def test_frozen_values_07_03():
    t = table_for([0.7, 0.3])
    assert np.allclose(t.joint, [[0.7, 0.0], [0.0, 0.3]], atol=1e-12)
    assert np.allclose(t.delta, [[0.21, 0.21], [0.21, 0.21]], atol=1e-12)
    assert np.allclose(t.local_a, [0.7, 0.3], atol=1e-12)
    assert np.allclose(t.local_b, [0.7, 0.3], atol=1e-12)


def test_product_state_no_correlations():
    t = table_for([1.0, 0.0])
    assert np.max(t.delta) <= 1e-12
    assert ec.is_factorizable(t, 1e-9)


def test_epr_deltas():
    t = table_for([0.5, 0.5])
    assert np.allclose(t.delta, 0.25, atol=1e-12)
    assert not ec.is_factorizable(t, 1e-9)


def test_conditional_identity_and_mask():
    t = table_for([1.0, 0.0])
    cond = t.conditional
    assert isinstance(cond, np.ma.MaskedArray)
    # column 0 is supported, column 1 has P(j_B) = 0 and must be masked
    assert not np.ma.getmaskarray(cond)[:, 0].any()
    assert np.ma.getmaskarray(cond)[:, 1].all()
    assert cond[0, 0] == 1.0
    assert cond[1, 0] == 0.0


def test_conditional_times_local_equals_joint(rng):
    for _ in range(100):
        n = int(rng.integers(2, 9))
        lams = np.sort(rng.dirichlet(np.ones(n)))[::-1]
        t = table_for(lams, (n, n))
        mask = np.ma.getmaskarray(t.conditional)
        cond = np.ma.getdata(t.conditional)
        for i in range(n):
            for j in range(n):
                if not mask[i, j]:
                    assert abs(cond[i, j] * t.local_b[j] - t.joint[i, j]) <= 1e-9


def test_two_delta_forms_agree(rng):
    # |P(i|j) - P(i)| P(j) must equal |P(i,j) - P(i)P(j)| where defined
    for _ in range(100):
        n = int(rng.integers(2, 9))
        lams = np.sort(rng.dirichlet(np.ones(n)))[::-1]
        t = table_for(lams, (n, n))
        mask = np.ma.getmaskarray(t.conditional)
        cond = np.ma.getdata(t.conditional)
        for i in range(n):
            for j in range(n):
                if not mask[i, j]:
                    alt = abs(cond[i, j] - t.local_a[i]) * t.local_b[j]
                    assert abs(alt - t.delta[i, j]) <= 1e-9


def test_sums_and_marginals(rng):
    for _ in range(100):
        st = random_pure(rng, (int(rng.integers(2, 6)), int(rng.integers(2, 6))))
        t = ec.correlation_table(ec.schmidt_decompose(st))
        assert abs(np.sum(t.local_a) - 1) <= 1e-9
        assert abs(np.sum(t.local_b) - 1) <= 1e-9
        assert abs(np.sum(t.joint) - 1) <= 1e-9
        assert np.max(np.abs(t.joint.sum(axis=1) - t.local_a)) <= 1e-9
        assert np.max(np.abs(t.joint.sum(axis=0) - t.local_b)) <= 1e-9
        assert np.all(t.delta >= 0)
        assert np.max(np.abs(t.delta - t.delta.T)) <= 1e-12


def test_is_factorizable_threshold():
    t = table_for([0.999999999, 1e-9])
    assert ec.is_factorizable(t, 1e-6)
    assert not ec.is_factorizable(table_for([0.5, 0.5]), 1e-6)


def test_is_factorizable_tol_validation():
    t = table_for([0.5, 0.5])
    with pytest.raises(ec.ValidationError):
        ec.is_factorizable(t, -1.0)
    with pytest.raises(ec.ValidationError):
        ec.is_factorizable(t, float("nan"))


def test_rank_dichotomy_random(rng):
    from conftest import random_product

    for _ in range(100):
        prod = random_product(rng, (3, 3))
        dec = ec.schmidt_decompose(prod)
        assert ec.is_factorizable(ec.correlation_table(dec), 1e-9)
        assert ec.schmidt_rank(dec) == 1
    for _ in range(100):
        st = random_pure(rng, (3, 3))
        dec = ec.schmidt_decompose(st)
        if ec.schmidt_rank(dec) > 1:
            assert not ec.is_factorizable(ec.correlation_table(dec), 1e-9)
