import numpy as np
import pytest

import entcorr as ec


def random_pure(rng, dims):
    """Haar-like random pure state via normalized complex normals."""
    n = int(np.prod(dims))
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    amps /= np.linalg.norm(amps)
    return ec.validate_pure(amps, dims)


def random_product(rng, dims, real=False):
    locals_ = []
    for d in dims:
        v = rng.normal(size=d) + (0 if real else 1j * rng.normal(size=d))
        v = v / np.linalg.norm(v)
        locals_.append(v)
    amps = locals_[0]
    for v in locals_[1:]:
        amps = np.kron(amps, v)
    return ec.validate_pure(amps.astype(complex), dims)


def schmidt_state(lams, dims):
    """Sum_i sqrt(lam_i) |i>|i> embedded in the given bipartite dims."""
    lams = np.asarray(lams, dtype=float)
    amps = np.zeros(dims[0] * dims[1], dtype=complex)
    for i, lam in enumerate(lams):
        amps[i * dims[1] + i] = np.sqrt(lam)
    return ec.validate_pure(amps, dims)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def werner(p):
    bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    m = p * np.outer(bell, bell.conj()) + (1 - p) * np.eye(4) / 4
    return ec.validate_density(m, (2, 2))


def random_rank2_density(rng, dim=4, dims=(2, 2)):
    vs = rng.normal(size=(2, dim)) + 1j * rng.normal(size=(2, dim))
    vs /= np.linalg.norm(vs, axis=1, keepdims=True)
    w = float(rng.uniform(0.15, 0.85))
    rho = w * np.outer(vs[0], vs[0].conj()) + (1 - w) * np.outer(vs[1], vs[1].conj())
    return ec.validate_density(rho, dims)


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
