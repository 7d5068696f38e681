#!/usr/bin/env python3
"""
测试线性代数基础（本征分解、张量积、偏迹、矩阵函数、交换算符）
"""

import sys

import numpy as np
import pytest
from loguru import logger

from coherence_cost.errors import DimensionMismatch, DimensionTooLarge, InvalidParameter, NotHermitian, RankDeficient
from coherence_cost.matrix_core import (
    eigh,
    kron,
    mat_func,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    swap_unitary,
    unitarity_violation,
)
from coherence_cost.tolerances import configure, with_overrides


def test_eigh_pauli_x():
    decomp = eigh(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(decomp.eigenvalues, [-1.0, 1.0], atol=1e-14)
    v = decomp.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-14)


def test_eigh_reconstructs_random_hermitian():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = (a + a.conj().T) / 2
    decomp = eigh(h)
    assert np.all(np.diff(decomp.eigenvalues) >= 0)
    assert np.linalg.norm(decomp.reconstruct() - h) < 1e-10


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NotHermitian) as info:
        eigh(np.array([[0, 1], [0, 0]]))
    assert info.value.measured == pytest.approx(1.0)


def test_eigh_one_by_one():
    decomp = eigh(np.array([[2.5]]))
    assert decomp.eigenvalues.tolist() == [2.5]


def test_kron_dimensions_and_entries():
    a = np.array([[1, 2], [3, 4]])
    b = np.eye(3)
    out = kron(a, b)
    assert out.shape == (6, 6)
    # out[i*db + k, j*db + l] = a[i, j] * b[k, l]
    assert out[1 * 3 + 2, 0 * 3 + 2] == 3
    assert out[1 * 3 + 2, 0 * 3 + 1] == 0


def test_kron_joint_cap():
    previous = configure(with_overrides(max_joint_dim=8))
    try:
        with pytest.raises(DimensionTooLarge):
            kron(np.eye(3), np.eye(3))
    finally:
        configure(previous)


def test_partial_trace_of_product():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((2, 2)) + 0j
    b = rng.standard_normal((3, 3)) + 0j
    np.testing.assert_allclose(partial_trace(kron(a, b), (2, 3), keep="first"), np.trace(b) * a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(kron(a, b), (2, 3), keep="second"), np.trace(a) * b, atol=1e-14)


def test_partial_trace_bell_state():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(partial_trace(np.outer(psi, psi), (2, 2)), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_swap_product_is_matrix_product():
    # Tr_2[T (A (x) B)] = B A
    rng = np.random.default_rng(1)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    out = partial_trace(swap_unitary(3) @ kron(a, b), (3, 3))
    np.testing.assert_allclose(out, b @ a, atol=1e-12)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(6), (4, 2))


def test_mat_func_exp_of_zero_and_log_of_identity():
    np.testing.assert_allclose(mat_func(np.zeros((3, 3)), "exp"), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(mat_func(np.eye(3), "log"), np.zeros((3, 3)), atol=1e-15)


def test_mat_func_log_inverts_exp():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = (a + a.conj().T) / 2
    np.testing.assert_allclose(mat_func(mat_func(h, "exp"), "log"), h, atol=1e-10)


def test_mat_func_log_rank_deficient():
    with pytest.raises(RankDeficient):
        mat_func(np.diag([1.0, 0.0]), "log")


def test_mat_func_unknown_function():
    with pytest.raises(InvalidParameter):
        mat_func(np.eye(2), "sqrt")


def test_swap_unitary_properties():
    for d in (1, 2, 3, 4):
        t = swap_unitary(d)
        np.testing.assert_array_equal(t @ t, np.eye(d * d))
        assert unitarity_violation(t) == 0.0
    a = np.diag([1.0, 2.0])
    b = np.array([[0, 1], [1, 0]])
    t = swap_unitary(2)
    np.testing.assert_allclose(t @ kron(a, b) @ t, kron(b, a))


def test_matrix_json_fixture_format():
    m = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    payload = matrix_to_json(m)
    assert payload["dim"] == 2
    assert payload["entries"][1] == [0.0, 0.5]
    np.testing.assert_array_equal(matrix_from_json(payload), m)
    with pytest.raises(DimensionMismatch):
        matrix_from_json({"dim": 3, "entries": payload["entries"]})


if __name__ == "__main__":
    code = pytest.main([__file__, "-q"])
    logger.info(f"{'✅' if code == 0 else '❌'} test_matrix_core: exit {code}")
    sys.exit(code)
