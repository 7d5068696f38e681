"""
Generalised thermal operations (GTO) and stabilizing maps.

A plan ``(U, rho_r, H_r)`` acts on the system as

    Phi(rho) = Tr_r[U (rho (x) rho_r) U^dagger]

and is a GTO when ``[U, H_s (x) I + I (x) H_r] = 0`` and ``[rho_r, H_r] = 0``.
A stabilizer for a target undoes one collision: ``Phi_s(Phi_beta(rho)) = rho``.

Targets without coherence have an explicit GTO stabilizer (full swap with a
fresh copy of the target, H_r = H_s). Targets with coherence have none; the
swap plan still works with the effective Hamiltonian as H_r, but then U no
longer conserves energy. The absence of a GTO stabilizer is certified by the
two contraction facts checked in :func:`verify_proposition1`, not by
searching all GTOs.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .coherence import coherence, contraction_factor, l1_distance
from .collision_channel import PartialSwapChannel, apply
from .ensembles import (
    random_block_diagonal_state,
    random_block_unitary,
    random_density_matrix,
    random_hamiltonian,
)
from .errors import CoherentTarget, DimensionMismatch, InvalidParameter
from .matrix_core import as_square, commutator, dagger, eigh, kron, max_abs, partial_trace, swap_unitary, unitarity_violation
from .thermo_states import BetaLike, DensityMatrix, Hamiltonian, effective_hamiltonian, gibbs_state, validate_state
from .tolerances import active

UNITARITY_TOL = 1e-12
STABILIZATION_TOL = 1e-12
MONOTONICITY_SLACK = 1e-10
CONTRACTION_SLACK = 1e-12
ENERGY_SIGNATURE_MIN = 1e-6

NECESSITY_NOTE = (
    "necessity is certified by the lemma chain (one collision strictly lowers coherence; "
    "GTOs never raise it), not by an exhaustive search over GTOs"
)
SAMPLING_NOTE = (
    "one thermalizing machine per trial with sampled theta; the union over all machines is not enumerated"
)


@dataclass(frozen=True, eq=False)
class StabilizerPlan:
    """
    Candidate counter-thermalization map ``Tr_r[U (rho (x) rho_r) U^dagger]``.

    Raises (on construction):
        DimensionMismatch: If dim(U) != dim(H_s) * dim(H_r) or dim(rho_r) != dim(H_r)
        InvalidParameter: If U is not unitary within 1e-12
    """

    u: np.ndarray
    rho_r: DensityMatrix
    h_r: Hamiltonian
    h_s: Hamiltonian

    def __post_init__(self):
        u = as_square(self.u, "U")
        if u.shape[0] != self.h_s.dim * self.h_r.dim:
            raise DimensionMismatch(
                f"U has dim {u.shape[0]}, expected {self.h_s.dim} x {self.h_r.dim} = {self.h_s.dim * self.h_r.dim}"
            )
        if self.rho_r.dim != self.h_r.dim:
            raise DimensionMismatch(f"rho_r dim {self.rho_r.dim} does not match H_r dim {self.h_r.dim}")
        violation = unitarity_violation(u)
        if violation > UNITARITY_TOL:
            raise InvalidParameter(f"U is not unitary (max |U^dagger U - I| = {violation:.3e})", measured=violation)
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "u", u)

    def __call__(self, rho: DensityMatrix) -> DensityMatrix:
        return apply_plan(self, rho)

    def joint_hamiltonian(self) -> np.ndarray:
        """``H_s (x) I + I (x) H_r``."""
        return kron(self.h_s.matrix, np.eye(self.h_r.dim)) + kron(np.eye(self.h_s.dim), self.h_r.matrix)


@dataclass(frozen=True)
class GtoDiagnostics:
    """Commutator norms (max-abs entries) deciding GTO membership."""

    energy_commutator_norm: float
    stationarity_commutator_norm: float
    is_gto: bool


@dataclass(frozen=True)
class RestoringCheck:
    """Whether m applications of a plan return every path state to the target."""

    is_restoring: bool
    max_deviation: float


@dataclass(frozen=True)
class Proposition1Report:
    """Outcome of :func:`verify_proposition1`."""

    dim: int
    trials: int
    seed: int
    sufficiency_total: int
    sufficiency_passed: int
    max_stabilization_error: float
    necessity_total: int
    strict_decrease_count: int
    max_contraction_ratio: float
    max_bound_excess: float
    monotonicity_violations: int
    gto_stabilizations: int
    coherent_plan_failures: int
    min_energy_commutator_norm: float
    max_stationarity_norm: float
    notes: Tuple[str, ...] = field(default=(NECESSITY_NOTE, SAMPLING_NOTE))

    @property
    def passed(self) -> bool:
        return (
            self.sufficiency_passed == self.sufficiency_total
            and self.strict_decrease_count == self.necessity_total
            and self.max_bound_excess <= CONTRACTION_SLACK
            and self.monotonicity_violations == 0
            and self.gto_stabilizations == 0
            and self.coherent_plan_failures == 0
        )


def check_gto(plan: StabilizerPlan, tol_gto: Optional[float] = None) -> GtoDiagnostics:
    """
    Measure both GTO conditions of a plan.

    Returns:
        GtoDiagnostics: max-abs of ``[U, H_s + H_r]`` and of ``[rho_r, H_r]``;
        ``is_gto`` when both are below tol_gto
    """
    tol_gto = active().tol_gto if tol_gto is None else tol_gto
    energy = max_abs(commutator(plan.u, plan.joint_hamiltonian()))
    stationarity = max_abs(commutator(plan.rho_r.matrix, plan.h_r.matrix))
    return GtoDiagnostics(
        energy_commutator_norm=energy,
        stationarity_commutator_norm=stationarity,
        is_gto=energy < tol_gto and stationarity < tol_gto,
    )


def apply_plan(plan: StabilizerPlan, rho: DensityMatrix) -> DensityMatrix:
    """
    ``Tr_r[U (rho (x) rho_r) U^dagger]``.

    Raises:
        DimensionMismatch: If dim(rho) != dim(H_s)
    """
    rho = validate_state(rho)
    if rho.dim != plan.h_s.dim:
        raise DimensionMismatch(f"state dim {rho.dim} does not match H_s dim {plan.h_s.dim}")
    joint = plan.u @ kron(rho.matrix, plan.rho_r.matrix) @ dagger(plan.u)
    return DensityMatrix(partial_trace(joint, (plan.h_s.dim, plan.h_r.dim), keep="first"))


def build_block_diagonal_stabilizer(rho_target: DensityMatrix, h_s: Hamiltonian) -> StabilizerPlan:
    """
    GTO stabilizer for a target without coherence: ``U = T``, ``rho_r = target``, ``H_r = H_s``.

    The full swap hands back the fresh copy whatever the input, so the plan
    is also a restoring map.

    Raises:
        CoherentTarget: If C(target) > tol_coh (no GTO stabilizer exists);
            targets in the borderline band below coh_warn are logged first
    """
    rho_target = validate_state(rho_target)
    tol = active()
    amount = coherence(rho_target, h_s)
    if amount > tol.tol_coh:
        if amount < tol.coh_warn:
            logger.warning(f"target coherence {amount:.3e} is borderline; treating the target as coherent")
        raise CoherentTarget(
            f"target has coherence {amount:.3e} > {tol.tol_coh:.1e}; no GTO stabilizer exists", measured=amount
        )
    return StabilizerPlan(u=swap_unitary(h_s.dim), rho_r=rho_target, h_r=h_s, h_s=h_s)


def build_coherent_stabilizer(rho_target: DensityMatrix, beta: BetaLike, h_s: Hamiltonian) -> StabilizerPlan:
    """
    Swap stabilizer with a resource copy of the target and ``H_r`` from the effective Hamiltonian.

    ``[rho_r, H_r] = 0`` holds by construction; ``U = T`` conserves
    ``H_s + H_r`` only when H_r equals H_s up to a shift (target = Gibbs state).

    Raises:
        RankDeficient: If the target is not full rank
    """
    rho_target = validate_state(rho_target)
    if rho_target.dim != h_s.dim:
        raise DimensionMismatch(f"target dim {rho_target.dim} does not match H_s dim {h_s.dim}")
    h_r = effective_hamiltonian(rho_target, beta)
    return StabilizerPlan(u=swap_unitary(h_s.dim), rho_r=rho_target, h_r=h_r, h_s=h_s)


def random_gto_plan(h_s: Hamiltonian, rng: np.random.Generator) -> StabilizerPlan:
    """
    Random GTO with a copy of the system as resource.

    ``H_r = H_s``, ``rho_r`` diagonal in the H_r eigenbasis, and ``U`` Haar-random
    inside every degenerate eigenspace of ``H_s (x) I + I (x) H_s``.
    """
    d = h_s.dim
    joint = kron(h_s.matrix, np.eye(d)) + kron(np.eye(d), h_s.matrix)
    u = random_block_unitary(eigh(joint), rng)
    return StabilizerPlan(u=u, rho_r=random_block_diagonal_state(h_s, rng), h_r=h_s, h_s=h_s)


def is_restoring(
    plan: StabilizerPlan,
    target: DensityMatrix,
    path: Sequence[DensityMatrix],
    m: int = 1,
    tol: float = STABILIZATION_TOL,
) -> RestoringCheck:
    """Check that ``m`` applications of the plan send every path state to the target."""
    target = validate_state(target)
    worst = 0.0
    for state in path:
        out = validate_state(state)
        for _ in range(m):
            out = apply_plan(plan, out)
        worst = max(worst, max_abs(out.matrix - target.matrix))
    return RestoringCheck(is_restoring=worst <= tol, max_deviation=worst)


def verify_proposition1(dim: int, trials: int, seed: int, theta: Optional[float] = None) -> Proposition1Report:
    """
    Numerical check of "a GTO stabilizer exists iff the target has no coherence".

    Sufficiency: random block-diagonal targets (every tenth one the Gibbs
    state) get the swap stabilizer, which must be a GTO and undo a collision.

    Necessity: for random coherent targets one collision must strictly lower
    the coherence (ratio <= cos theta < 1), a random GTO must not raise it
    again and therefore cannot return the target, and the coherent swap plan
    must be stationary but not energy conserving.

    Args:
        dim: System dimension, 2..5
        trials: Targets per branch
        seed: Seed of the random stream
        theta: Fixed swap angle; sampled from [0.01, pi/2] per trial when None

    Returns:
        Proposition1Report: Counts and extreme values of both branches
    """
    if not 2 <= dim <= 5:
        raise InvalidParameter(f"dim must lie in 2..5, got {dim}", measured=float(dim))
    rng = np.random.default_rng(seed)
    tol = active()

    suff_passed = 0
    max_stab_err = 0.0
    strict = 0
    max_ratio = 0.0
    max_excess = -math.inf
    mono_violations = 0
    gto_stabilized = 0
    plan_failures = 0
    min_energy = math.inf
    max_stationarity = 0.0

    for trial in range(trials):
        h_s = random_hamiltonian(dim, rng)
        beta = float(rng.choice([0.1, 1.0, 10.0]))
        angle = float(rng.uniform(0.01, math.pi / 2)) if theta is None else theta
        ch = PartialSwapChannel(theta=angle, beta=beta, h_s=h_s)

        target = gibbs_state(h_s, beta) if trial % 10 == 0 else random_block_diagonal_state(h_s, rng)
        plan = build_block_diagonal_stabilizer(target, h_s)
        diagnostics = check_gto(plan)
        err = max_abs(apply_plan(plan, apply(ch, target)).matrix - target.matrix)
        max_stab_err = max(max_stab_err, err)
        if diagnostics.is_gto and err <= STABILIZATION_TOL:
            suff_passed += 1

        coherent = random_density_matrix(dim, rng)
        ratio = contraction_factor(ch, coherent)
        max_ratio = max(max_ratio, ratio)
        max_excess = max(max_excess, ratio - ch.c)
        if ratio < 1.0 and ratio <= ch.c + CONTRACTION_SLACK:
            strict += 1
        thermalized = apply(ch, coherent)
        restored = apply_plan(random_gto_plan(h_s, rng), thermalized)
        if coherence(restored, h_s) > coherence(thermalized, h_s) + MONOTONICITY_SLACK:
            mono_violations += 1
        if l1_distance(restored, coherent, h_s) <= STABILIZATION_TOL:
            gto_stabilized += 1

        coherent_plan = check_gto(build_coherent_stabilizer(coherent, beta, h_s))
        min_energy = min(min_energy, coherent_plan.energy_commutator_norm)
        max_stationarity = max(max_stationarity, coherent_plan.stationarity_commutator_norm)
        if (
            coherent_plan.stationarity_commutator_norm >= tol.tol_gto
            or coherent_plan.energy_commutator_norm <= ENERGY_SIGNATURE_MIN
        ):
            plan_failures += 1

    report = Proposition1Report(
        dim=dim,
        trials=trials,
        seed=seed,
        sufficiency_total=trials,
        sufficiency_passed=suff_passed,
        max_stabilization_error=max_stab_err,
        necessity_total=trials,
        strict_decrease_count=strict,
        max_contraction_ratio=max_ratio,
        max_bound_excess=max_excess if trials else 0.0,
        monotonicity_violations=mono_violations,
        gto_stabilizations=gto_stabilized,
        coherent_plan_failures=plan_failures,
        min_energy_commutator_norm=min_energy if trials else 0.0,
        max_stationarity_norm=max_stationarity,
    )
    logger.debug(f"proposition check dim={dim}: sufficiency {suff_passed}/{trials}, strict decrease {strict}/{trials}")
    return report
