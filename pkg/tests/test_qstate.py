import json

import numpy as np
import pytest

import entcorr as ec
from entcorr.qstate import parse_state_text, write_state_text


def test_validate_pure_epr():
    amps = np.array([1 / np.sqrt(2), 0, 0, -1 / np.sqrt(2)])
    st = ec.validate_pure(amps, (2, 2))
    assert st.dims == (2, 2)
    assert abs(np.linalg.norm(st.amplitudes) - 1) < 1e-12


def test_validate_pure_basis_state():
    st = ec.validate_pure(np.array([1, 0, 0, 0]), (2, 2))
    assert st.amplitudes[0] == 1.0


def test_validate_pure_rejects_unnormalized():
    with pytest.raises(ec.NotNormalized):
        ec.validate_pure(np.array([1, 0, 0, 1]), (2, 2))


def test_validate_pure_rejects_wrong_length():
    with pytest.raises(ec.DimensionMismatch):
        ec.validate_pure(np.array([1, 0, 0]), (2, 2))


def test_validate_pure_rejects_nonfinite():
    with pytest.raises(ec.NonFinite):
        ec.validate_pure(np.array([np.nan, 0, 0, 0]), (2, 2))
    with pytest.raises(ec.NonFinite):
        ec.validate_pure(np.array([np.inf + 0j, 0, 0, 0]), (2, 2))


def test_validate_pure_rejects_bad_dims():
    with pytest.raises(ec.ValidationError):
        ec.validate_pure(np.array([1.0, 0.0]), (2,))
    with pytest.raises(ec.ValidationError):
        ec.validate_pure(np.ones(16) / 4.0, (2, 2, 2, 2))
    with pytest.raises(ec.ValidationError):
        ec.validate_pure(np.array([1.0, 0.0]), (2, 0))


def test_validate_pure_renormalizes_within_tolerance():
    amps = np.array([1, 0, 0, 1]) / np.sqrt(2) * (1 + 4e-10)
    st = ec.validate_pure(amps, (2, 2))
    assert abs(np.sum(np.abs(st.amplitudes) ** 2) - 1) < 1e-15


def test_validate_pure_idempotent():
    # squared-norm deviation about 8e-10, inside NORM_TOL
    amps = (np.array([3, 0, 1j, 1]) / np.sqrt(11)) * (1 + 4e-10)
    st1 = ec.validate_pure(amps, (2, 2))
    st2 = ec.validate_pure(st1.amplitudes, st1.dims)
    assert np.array_equal(st1.amplitudes, st2.amplitudes)


def test_pure_state_immutable():
    st = ec.validate_pure(np.array([1, 0, 0, 0]), (2, 2))
    with pytest.raises((ValueError, AttributeError)):
        st.amplitudes[0] = 0.5


def test_validate_density_maximally_mixed():
    dm = ec.validate_density(np.eye(4) / 4, (2, 2))
    assert dm.dims == (2, 2)
    assert abs(np.trace(dm.matrix) - 1) < 1e-12


def test_validate_density_pure_projector():
    amps = np.array([1, 0, 0, -1]) / np.sqrt(2)
    dm = ec.validate_density(np.outer(amps, amps.conj()), (2, 2))
    assert abs(ec.purity(dm) - 1.0) < 1e-12


def test_validate_density_rejects_negative_eigenvalue():
    m = np.diag([0.6, 0.5, -0.1, 0.0])
    with pytest.raises(ec.NotPositive):
        ec.validate_density(m, (2, 2))


def test_validate_density_rejects_nonhermitian():
    m = np.eye(4) / 4
    m[0, 1] = 0.2
    with pytest.raises(ec.NotHermitian):
        ec.validate_density(m, (2, 2))


def test_validate_density_rejects_bad_trace():
    with pytest.raises(ec.TraceNotOne):
        ec.validate_density(np.eye(4) / 3, (2, 2))


def test_validate_density_rejects_wrong_shape():
    with pytest.raises(ec.DimensionMismatch):
        ec.validate_density(np.eye(3) / 3, (2, 2))


def test_purity_values():
    assert abs(ec.purity(ec.validate_density(np.eye(4) / 4, (2, 2))) - 0.25) < 1e-12
    m = np.zeros((4, 4))
    m[0, 0] = 0.5
    m[3, 3] = 0.5
    assert abs(ec.purity(ec.validate_density(m, (2, 2))) - 0.5) < 1e-12


def test_purity_one_iff_top_eigenvalue_one(rng):
    for _ in range(50):
        amps = rng.normal(size=4) + 1j * rng.normal(size=4)
        amps /= np.linalg.norm(amps)
        w = float(rng.uniform(0, 1))
        other = rng.normal(size=4) + 1j * rng.normal(size=4)
        other /= np.linalg.norm(other)
        rho = w * np.outer(amps, amps.conj()) + (1 - w) * np.outer(other, other.conj())
        dm = ec.validate_density(rho, (2, 2))
        top = float(np.linalg.eigvalsh(dm.matrix)[-1])
        assert (ec.purity(dm) >= 1 - 1e-9) == (top >= 1 - 1e-9)


def test_dominant_eigenvector_roundtrip():
    amps = np.array([0.6, 0, 0.8j, 0])
    st = ec.validate_pure(amps, (2, 2))
    back = ec.dominant_eigenvector(st.density())
    overlap = abs(np.vdot(back.amplitudes, st.amplitudes))
    assert abs(overlap - 1) < 1e-9


def test_dominant_eigenvector_rejects_mixed():
    with pytest.raises(ec.NotNormalized):
        ec.dominant_eigenvector(ec.validate_density(np.eye(4) / 4, (2, 2)))


def test_state_file_roundtrip_pure(tmp_path):
    amps = np.array([0.5, 0.5j, -0.5, 0.5])
    st = ec.validate_pure(amps, (2, 2))
    path = tmp_path / "s.json"
    ec.save_state(st, path)
    text1 = path.read_text()
    st2 = ec.load_state(path)
    assert write_state_text(st2) == text1
    assert np.array_equal(st2.amplitudes, st.amplitudes)


def test_state_file_roundtrip_mixed(tmp_path):
    dm = ec.validate_density(np.eye(4) / 4, (2, 2))
    path = tmp_path / "m.json"
    ec.save_state(dm, path)
    dm2 = ec.load_state(path)
    assert write_state_text(dm2) == path.read_text()
    assert np.array_equal(dm2.matrix, dm.matrix)


def test_parser_rejects_unknown_fields():
    doc = {"kind": "pure", "dims": [2, 2], "data": [[1.0, 0.0]] * 4, "extra": 1}
    with pytest.raises(ec.StateFormatError):
        parse_state_text(json.dumps(doc))


def test_parser_rejects_missing_fields():
    with pytest.raises(ec.StateFormatError):
        parse_state_text(json.dumps({"kind": "pure", "dims": [2, 2]}))


def test_parser_rejects_nan_tokens():
    text = '{"kind": "pure", "dims": [2, 2], "data": [[NaN, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}'
    with pytest.raises(ec.StateFormatError):
        parse_state_text(text)


def test_parser_rejects_float_dims():
    text = '{"kind": "pure", "dims": [2.0, 2], "data": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}'
    with pytest.raises(ec.StateFormatError):
        parse_state_text(text)


def test_parser_rejects_bad_pairs():
    doc = {"kind": "pure", "dims": [2, 2], "data": [[1.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]}
    with pytest.raises(ec.StateFormatError):
        parse_state_text(json.dumps(doc))
    doc["data"] = [[1.0, 0.0, 0.0]] + [[0.0, 0.0]] * 3
    with pytest.raises(ec.StateFormatError):
        parse_state_text(json.dumps(doc))


def test_parser_rejects_unknown_kind():
    doc = {"kind": "other", "dims": [2, 2], "data": []}
    with pytest.raises(ec.StateFormatError):
        parse_state_text(json.dumps(doc))


def test_parser_validates_content():
    # well-formed file, invalid physics: norm 2
    doc = {"kind": "pure", "dims": [2, 2], "data": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}
    with pytest.raises(ec.NotNormalized):
        parse_state_text(json.dumps(doc))


def test_writer_canonical_negative_zero():
    st = ec.validate_pure(np.array([1.0, 0.0, -0.0, 0.0]), (2, 2))
    assert "-0.0" not in write_state_text(st)
