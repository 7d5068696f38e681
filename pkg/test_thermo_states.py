#!/usr/bin/env python3
"""
测试态、哈密顿量、吉布斯态与有效哈密顿量
"""

import math
import sys

import numpy as np
import pytest
from loguru import logger

from coherence_cost.ensembles import random_density_matrix, random_hamiltonian
from coherence_cost.errors import DimensionTooLarge, InvalidParameter, NotHermitian, NotPSD, RankDeficient, TraceNotOne
from coherence_cost.presets import hamiltonian_preset, state_preset
from coherence_cost.thermo_states import (
    DensityMatrix,
    Hamiltonian,
    InverseTemperature,
    commutator_norm,
    effective_hamiltonian,
    gibbs_state,
    partition_function,
    regularize,
    validate_state,
)


def test_validate_state_accepts_mixed_and_pure():
    assert validate_state(np.eye(2) / 2).dim == 2
    assert validate_state(np.diag([1.0, 0.0])).min_eigenvalue == pytest.approx(0.0, abs=1e-15)


def test_validate_state_errors_carry_measurement():
    with pytest.raises(TraceNotOne) as info:
        validate_state(np.diag([0.6, 0.6]))
    assert info.value.measured == pytest.approx(1.2)
    with pytest.raises(NotPSD) as info:
        validate_state(np.diag([1.5, -0.5]))
    assert info.value.measured == pytest.approx(-0.5)
    with pytest.raises(NotHermitian):
        validate_state(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        DensityMatrix(np.eye(65) / 65)


def test_inverse_temperature_domain():
    assert InverseTemperature(2).beta == 2.0
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidParameter):
            InverseTemperature(bad)


def test_gibbs_qubit_ln2():
    rho = gibbs_state(Hamiltonian(np.diag([0.0, 1.0])), math.log(2.0))
    np.testing.assert_allclose(rho.matrix, np.diag([2 / 3, 1 / 3]), atol=1e-15)


def test_gibbs_sigma_z_beta_one():
    rho = gibbs_state(hamiltonian_preset("qubit-sigma-z"), 1.0)
    e = math.e
    np.testing.assert_allclose(np.diag(rho.matrix).real, [(1 / e) / (e + 1 / e), e / (e + 1 / e)], atol=1e-15)


def test_gibbs_degenerate_is_maximally_mixed():
    rho = gibbs_state(Hamiltonian(np.zeros((3, 3))), 5.0)
    np.testing.assert_allclose(rho.matrix, np.eye(3) / 3, atol=1e-15)


def test_gibbs_large_beta_does_not_underflow():
    rho = gibbs_state(Hamiltonian(np.diag([0.0, 1.0])), 1e3)
    np.testing.assert_allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-15)


def test_partition_function():
    assert partition_function(Hamiltonian(np.diag([0.0, 1.0])), math.log(2.0)) == pytest.approx(1.5)


def test_effective_hamiltonian_of_gibbs_recovers_spectrum():
    rng = np.random.default_rng(11)
    h = random_hamiltonian(4, rng)
    beta = 0.7
    h_r = effective_hamiltonian(gibbs_state(h, beta), beta)
    np.testing.assert_allclose(h_r.eigenvalues, h.eigenvalues - h.eigenvalues[0], atol=1e-10)
    assert h_r.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)


def test_effective_hamiltonian_roundtrip_and_commutation():
    rng = np.random.default_rng(12)
    rho = random_density_matrix(3, rng)
    h_r = effective_hamiltonian(rho, 2.0)
    assert commutator_norm(rho, h_r) < 1e-12
    np.testing.assert_allclose(gibbs_state(h_r, 2.0).matrix, rho.matrix, atol=1e-10)


def test_effective_hamiltonian_qubit_plus_mixture():
    rho = DensityMatrix(0.9 * state_preset("qubit-plus").matrix + 0.05 * np.eye(2))
    h_r = effective_hamiltonian(rho, math.log(2.0))
    assert h_r.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
    assert h_r.eigenvalues[1] == pytest.approx(math.log(0.95 / 0.05) / math.log(2.0), rel=1e-10)


def test_effective_hamiltonian_rank_deficient():
    with pytest.raises(RankDeficient) as info:
        effective_hamiltonian(state_preset("qubit-plus"), 1.0)
    assert "--regularize" in info.value.message


def test_regularize():
    rho = regularize(state_preset("qubit-plus"), 0.1)
    assert rho.is_full_rank()
    assert rho.min_eigenvalue == pytest.approx(0.05)
    with pytest.raises(InvalidParameter):
        regularize(state_preset("qubit-plus"), 1.5)


def test_hamiltonian_shift_keeps_eigenvectors():
    h = hamiltonian_preset("ladder 3")
    np.testing.assert_allclose(h.shifted(2.0).eigenvalues, [2.0, 3.0, 4.0])


@pytest.mark.parametrize(
    "name",
    ["maximally-mixed -1", "maximally-mixed 0", "random-full-rank 2 -5", "random-full-rank", "ladder 0"],
)
def test_preset_rejects_bad_arguments(name):
    with pytest.raises(InvalidParameter):
        if name.startswith("ladder"):
            hamiltonian_preset(name)
        else:
            state_preset(name)


def test_qubit_sigma_z_presets():
    assert state_preset("qubit-sigma-z").matrix[0, 0] == pytest.approx(1.0)
    np.testing.assert_allclose(np.diag(hamiltonian_preset("qubit-sigma-z").matrix).real, [1.0, -1.0])


if __name__ == "__main__":
    code = pytest.main([__file__, "-q"])
    logger.info(f"{'✅' if code == 0 else '❌'} test_thermo_states: exit {code}")
    sys.exit(code)
