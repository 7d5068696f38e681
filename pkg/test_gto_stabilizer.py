#!/usr/bin/env python3
"""
测试广义热操作（GTO）判定、稳定化方案与“存在 GTO 稳定器当且仅当无相干”的数值检验
"""

import math
import sys

import numpy as np
import pytest
from loguru import logger

from coherence_cost.coherence import coherence
from coherence_cost.collision_channel import PartialSwapChannel, apply, iterate
from coherence_cost.ensembles import random_block_diagonal_state, random_density_matrix, random_hamiltonian
from coherence_cost.errors import CoherentTarget, DimensionMismatch, InvalidParameter
from coherence_cost.gto_stabilizer import (
    StabilizerPlan,
    apply_plan,
    build_block_diagonal_stabilizer,
    build_coherent_stabilizer,
    check_gto,
    is_restoring,
    random_gto_plan,
    verify_proposition1,
)
from coherence_cost.matrix_core import kron, max_abs, swap_unitary
from coherence_cost.presets import hamiltonian_preset, state_preset
from coherence_cost.thermo_states import DensityMatrix, gibbs_state

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


@pytest.fixture
def ladder():
    return hamiltonian_preset("ladder 2")


def test_swap_with_diagonal_resource_is_gto(ladder):
    plan = StabilizerPlan(u=swap_unitary(2), rho_r=DensityMatrix(np.diag([0.7, 0.3])), h_r=ladder, h_s=ladder)
    diagnostics = check_gto(plan)
    assert diagnostics.is_gto
    assert diagnostics.energy_commutator_norm == 0.0


def test_coherent_resource_breaks_stationarity(ladder):
    plan = StabilizerPlan(u=swap_unitary(2), rho_r=state_preset("qubit-plus"), h_r=ladder, h_s=ladder)
    diagnostics = check_gto(plan)
    assert not diagnostics.is_gto
    assert diagnostics.stationarity_commutator_norm == pytest.approx(0.5, abs=1e-15)


def test_local_hadamard_breaks_energy_conservation():
    h = hamiltonian_preset("qubit-sigma-z")
    plan = StabilizerPlan(u=kron(HADAMARD, np.eye(2)), rho_r=state_preset("maximally-mixed 2"), h_r=h, h_s=h)
    diagnostics = check_gto(plan)
    assert not diagnostics.is_gto
    assert diagnostics.energy_commutator_norm > 0.5


def test_plan_validation(ladder):
    with pytest.raises(DimensionMismatch):
        StabilizerPlan(u=np.eye(2), rho_r=state_preset("maximally-mixed 2"), h_r=ladder, h_s=ladder)
    with pytest.raises(InvalidParameter):
        StabilizerPlan(u=2 * np.eye(4), rho_r=state_preset("maximally-mixed 2"), h_r=ladder, h_s=ladder)


def test_apply_plan_identity_and_swap(ladder):
    rho = random_density_matrix(2, np.random.default_rng(3))
    sigma = DensityMatrix(np.diag([0.6, 0.4]))
    identity = StabilizerPlan(u=np.eye(4), rho_r=sigma, h_r=ladder, h_s=ladder)
    assert max_abs(apply_plan(identity, rho).matrix - rho.matrix) < 1e-15
    swap = StabilizerPlan(u=swap_unitary(2), rho_r=sigma, h_r=ladder, h_s=ladder)
    assert max_abs(swap(rho).matrix - sigma.matrix) < 1e-15
    with pytest.raises(DimensionMismatch):
        apply_plan(swap, state_preset("maximally-mixed 3"))


def test_block_diagonal_stabilizer_undoes_collision(ladder):
    target = DensityMatrix(np.diag([0.7, 0.3]))
    ch = PartialSwapChannel(theta=0.6, beta=1.0, h_s=ladder)
    plan = build_block_diagonal_stabilizer(target, ladder)
    assert check_gto(plan).is_gto
    assert max_abs(apply_plan(plan, apply(ch, target)).matrix - target.matrix) < 1e-12


def test_block_diagonal_stabilizer_for_gibbs_state(ladder):
    ch = PartialSwapChannel(theta=1.1, beta=0.5, h_s=ladder)
    plan = build_block_diagonal_stabilizer(ch.rho_beta, ladder)
    assert check_gto(plan).is_gto
    assert max_abs(plan(apply(ch, ch.rho_beta)).matrix - ch.rho_beta.matrix) < 1e-12


def test_coherent_target_has_no_gto_stabilizer(ladder):
    with pytest.raises(CoherentTarget) as info:
        build_block_diagonal_stabilizer(state_preset("qubit-plus"), ladder)
    assert info.value.measured == pytest.approx(1.0)


def test_coherent_stabilizer_on_gibbs_conserves_energy(ladder):
    rho_beta = gibbs_state(ladder, 1.0)
    diagnostics = check_gto(build_coherent_stabilizer(rho_beta, 1.0, ladder))
    assert diagnostics.energy_commutator_norm < 1e-10
    assert diagnostics.stationarity_commutator_norm < 1e-10


def test_coherent_stabilizer_is_stationary_but_not_energy_conserving(ladder):
    target = DensityMatrix(0.9 * state_preset("qubit-plus").matrix + 0.05 * np.eye(2))
    plan = build_coherent_stabilizer(target, math.log(2.0), ladder)
    diagnostics = check_gto(plan)
    assert diagnostics.stationarity_commutator_norm < 1e-10
    assert diagnostics.energy_commutator_norm > 1e-3
    assert not diagnostics.is_gto

    ch = PartialSwapChannel(theta=math.pi / 4, beta=math.log(2.0), h_s=ladder)
    assert max_abs(plan(apply(ch, target)).matrix - target.matrix) < 1e-12


def test_random_gto_plans_never_raise_coherence():
    rng = np.random.default_rng(77)
    for _ in range(50):
        d = int(rng.integers(2, 5))
        h = random_hamiltonian(d, rng)
        plan = random_gto_plan(h, rng)
        assert check_gto(plan).is_gto
        rho = random_density_matrix(d, rng)
        assert coherence(apply_plan(plan, rho), h) <= coherence(rho, h) + 1e-10


def test_random_gto_plan_keeps_block_diagonal_states_block_diagonal():
    rng = np.random.default_rng(78)
    h = random_hamiltonian(3, rng)
    plan = random_gto_plan(h, rng)
    assert coherence(plan(random_block_diagonal_state(h, rng)), h) < 1e-10


def test_is_restoring(ladder):
    target = DensityMatrix(np.diag([0.8, 0.2]))
    ch = PartialSwapChannel(theta=0.4, beta=1.0, h_s=ladder)
    path = iterate(ch, state_preset("qubit-plus"), 5).states
    check = is_restoring(build_block_diagonal_stabilizer(target, ladder), target, path)
    assert check.is_restoring
    assert check.max_deviation < 1e-12

    identity = StabilizerPlan(u=np.eye(4), rho_r=target, h_r=ladder, h_s=ladder)
    check = is_restoring(identity, target, path, m=2)
    assert not check.is_restoring
    assert check.max_deviation > 0.1


def test_verify_proposition_qubit():
    report = verify_proposition1(dim=2, trials=100, seed=42)
    assert report.passed
    assert report.sufficiency_passed == 100
    assert report.strict_decrease_count == 100
    assert report.max_contraction_ratio < 1.0
    assert report.monotonicity_violations == 0
    assert report.gto_stabilizations == 0
    assert report.max_stationarity_norm < 1e-10
    assert report.min_energy_commutator_norm > 1e-6
    assert len(report.notes) == 2


def test_verify_proposition_is_seeded():
    a = verify_proposition1(dim=3, trials=10, seed=5)
    b = verify_proposition1(dim=3, trials=10, seed=5)
    assert a.max_contraction_ratio == b.max_contraction_ratio
    assert a.max_stabilization_error == b.max_stabilization_error


def test_verify_proposition_full_swap():
    report = verify_proposition1(dim=3, trials=20, seed=1, theta=math.pi / 2)
    assert report.passed
    assert report.max_contraction_ratio == pytest.approx(0.0, abs=1e-12)


def test_verify_proposition_dimension_range():
    with pytest.raises(InvalidParameter):
        verify_proposition1(dim=6, trials=1, seed=0)
    with pytest.raises(InvalidParameter):
        verify_proposition1(dim=1, trials=1, seed=0)


if __name__ == "__main__":
    code = pytest.main([__file__, "-q"])
    logger.info(f"{'✅' if code == 0 else '❌'} test_gto_stabilizer: exit {code}")
    sys.exit(code)
