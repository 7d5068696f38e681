#!/usr/bin/env python3
"""
测试热化机：闭式与联合空间两条路径、不动点、零律与平衡步数
"""

import math
import sys

import numpy as np
import pytest
from loguru import logger

from coherence_cost.coherence import l1_distance
from coherence_cost.collision_channel import (
    PartialSwapChannel,
    apply,
    apply_tensor,
    iterate,
    partial_swap_unitary,
    steps_to_equilibrium,
    zero_law_bound,
)
from coherence_cost.ensembles import random_density_matrix, random_hamiltonian
from coherence_cost.errors import DimensionMismatch, InvalidParameter, MaxStepsExceeded
from coherence_cost.matrix_core import kron, max_abs, unitarity_violation
from coherence_cost.presets import hamiltonian_preset, state_preset
from coherence_cost.tolerances import configure, with_overrides

LN2 = math.log(2.0)


@pytest.fixture
def qubit_machine():
    return PartialSwapChannel(theta=math.pi / 4, beta=LN2, h_s=hamiltonian_preset("ladder 2"))


def test_theta_domain():
    h = hamiltonian_preset("ladder 2")
    for bad in (0.0, -0.1, math.pi / 2 + 1e-9):
        with pytest.raises(InvalidParameter):
            PartialSwapChannel(theta=bad, beta=1.0, h_s=h)
    with pytest.raises(InvalidParameter):
        PartialSwapChannel(theta=0.3, beta=0.0, h_s=h)
    assert PartialSwapChannel(theta=math.pi / 2, beta=1.0, h_s=h).c == 0.0


def test_partial_swap_unitary(qubit_machine):
    assert unitarity_violation(partial_swap_unitary(qubit_machine)) < 1e-14


@pytest.mark.parametrize("theta", [0.1, math.pi / 4, math.pi / 2])
def test_partial_swap_conserves_energy(theta):
    h = hamiltonian_preset("ladder 3")
    p = partial_swap_unitary(PartialSwapChannel(theta=theta, beta=1.0, h_s=h))
    h_total = kron(h.matrix, np.eye(3)) + kron(np.eye(3), h.matrix)
    assert max_abs(p @ h_total - h_total @ p) < 1e-12


def test_gibbs_is_fixed_point(qubit_machine):
    rb = qubit_machine.rho_beta
    assert max_abs(apply(qubit_machine, rb).matrix - rb.matrix) < 1e-15


def test_qubit_plus_one_step(qubit_machine):
    out = apply(qubit_machine, state_preset("qubit-plus")).matrix
    # c^2 = s^2 = 1/2, rho_beta = diag(2/3, 1/3)
    np.testing.assert_allclose(out.diagonal().real, [7 / 12, 5 / 12], atol=1e-15)
    assert abs(out[0, 1]) == pytest.approx(math.sqrt(10.0) / 12.0, abs=1e-15)


def test_full_swap_replaces_state():
    h = hamiltonian_preset("ladder 3")
    ch = PartialSwapChannel(theta=math.pi / 2, beta=0.4, h_s=h)
    rho = random_density_matrix(3, np.random.default_rng(2))
    assert max_abs(apply(ch, rho).matrix - ch.rho_beta.matrix) < 1e-15


def test_closed_form_matches_tensor_path():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 6))
        ch = PartialSwapChannel(
            theta=float(rng.uniform(0.01, math.pi / 2)),
            beta=float(rng.choice([0.1, 1.0, 10.0])),
            h_s=random_hamiltonian(d, rng),
        )
        rho = random_density_matrix(d, rng)
        worst = max(worst, max_abs(apply(ch, rho).matrix - apply_tensor(ch, rho).matrix))
    assert worst < 1e-12


def test_output_is_a_state():
    rng = np.random.default_rng(8)
    ch = PartialSwapChannel(theta=0.2, beta=1.0, h_s=random_hamiltonian(4, rng))
    out = apply(ch, random_density_matrix(4, rng))
    assert abs(np.trace(out.matrix) - 1.0) < 1e-12
    assert out.min_eigenvalue > -1e-12


def test_dimension_mismatch(qubit_machine):
    with pytest.raises(DimensionMismatch):
        apply(qubit_machine, np.eye(3) / 3)


def test_iterate_path(qubit_machine):
    path = iterate(qubit_machine, state_preset("qubit-plus"), 50)
    assert len(path) == 51
    assert np.all(np.diff(path.distances) < 0)
    assert path.distances[-1] < 1e-6
    assert path.coherences[0] == pytest.approx(1.0)


def test_iterate_zero_steps_and_negative(qubit_machine):
    assert len(iterate(qubit_machine, state_preset("qubit-plus"), 0)) == 1
    with pytest.raises(InvalidParameter):
        iterate(qubit_machine, state_preset("qubit-plus"), -1)


def test_zero_law_bound_holds():
    rng = np.random.default_rng(31)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        ch = PartialSwapChannel(theta=float(rng.uniform(0.05, math.pi / 2)), beta=1.0, h_s=random_hamiltonian(d, rng))
        rho0 = random_density_matrix(d, rng)
        path = iterate(ch, rho0, 200)
        for n in range(201):
            assert path.distances[n] <= zero_law_bound(ch, rho0, n) + 1e-10


def test_steps_to_equilibrium_matches_brute_force(qubit_machine):
    rho = state_preset("qubit-plus")
    expected = 0
    state = rho
    while l1_distance(state, qubit_machine.rho_beta, qubit_machine.h_s) > 1e-6:
        state = apply(qubit_machine, state)
        expected += 1
    assert steps_to_equilibrium(qubit_machine, rho, 1e-6) == expected


def test_steps_to_equilibrium_edges(qubit_machine):
    assert steps_to_equilibrium(qubit_machine, qubit_machine.rho_beta, 1e-6) == 0
    full = PartialSwapChannel(theta=math.pi / 2, beta=LN2, h_s=qubit_machine.h_s)
    assert steps_to_equilibrium(full, state_preset("qubit-plus"), 1e-12) == 1
    with pytest.raises(InvalidParameter):
        steps_to_equilibrium(qubit_machine, qubit_machine.rho_beta, 0.0)


def test_steps_to_equilibrium_cap():
    ch = PartialSwapChannel(theta=1e-3, beta=1.0, h_s=hamiltonian_preset("ladder 2"))
    previous = configure(with_overrides(max_steps=10))
    try:
        with pytest.raises(MaxStepsExceeded):
            steps_to_equilibrium(ch, state_preset("qubit-plus"), 1e-6)
        with pytest.raises(MaxStepsExceeded):
            iterate(ch, state_preset("qubit-plus"), 11)
    finally:
        configure(previous)


if __name__ == "__main__":
    code = pytest.main([__file__, "-q"])
    logger.info(f"{'✅' if code == 0 else '❌'} test_collision_channel: exit {code}")
    sys.exit(code)
